#ifndef EMICAST_PCA_HPP
#define EMICAST_PCA_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "emicast/core.hpp"
#include "emicast/ingest.hpp"

namespace emicast {

// ============================================================================
// Covariance
// ============================================================================

/// C = (1/n) sum (x_i - mu)(x_i - mu)^T when centered, or the literal
/// uncentered (1/n) sum x_i x_i^T otherwise. The accumulated matrix is
/// averaged with its transpose so the result is symmetric by construction.
inline Matrix covariance(const Matrix& m, bool center = true) {
    const int n = m.rows();
    const int d = m.cols();
    if (n < 2) fail(ErrorCode::TooFewRows, "covariance needs at least 2 rows");
    if (d < 1) fail(ErrorCode::BadArgument, "covariance needs at least 1 column");

    std::vector<double> mu(d, 0.0);
    if (center) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) mu[j] += m(i, j);
        for (double& v : mu) v /= static_cast<double>(n);
    }

    Matrix c(d, d);
    for (int i = 0; i < n; ++i) {
        const double* row = m.row(i);
        for (int p = 0; p < d; ++p) {
            const double xp = row[p] - mu[p];
            for (int q = 0; q < d; ++q) c(p, q) += xp * (row[q] - mu[q]);
        }
    }
    for (double& v : c.data()) v /= static_cast<double>(n);
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) {
            const double s = 0.5 * (c(p, q) + c(q, p));
            c(p, q) = s;
            c(q, p) = s;
        }
    return c;
}

inline Matrix covariance(const FeatureMatrix& m, bool center = true) {
    return covariance(m.data, center);
}

// ============================================================================
// Symmetric eigensolver (cyclic Jacobi)
// ============================================================================

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j pairs with values[j]
    int sweeps = 0;
};

namespace detail {

inline double max_abs_offdiag(const Matrix& a) {
    double m = 0.0;
    for (int p = 0; p < a.rows(); ++p)
        for (int q = p + 1; q < a.cols(); ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

} // namespace detail

/// Cyclic Jacobi rotations until every off-diagonal magnitude drops below
/// tol * ||A||_F. Eigenpairs come back sorted by descending eigenvalue, and
/// each eigenvector's largest-magnitude entry is made positive.
inline EigenResult eigen_symmetric(const Matrix& a_in, double tol = 1e-12) {
    const int d = a_in.rows();
    if (d != a_in.cols()) fail(ErrorCode::NotSymmetric, "matrix is not square");
    if (d > 64) fail(ErrorCode::BadArgument, "eigen_symmetric supports d <= 64");
    if (!(tol > 0.0)) fail(ErrorCode::BadArgument, "tol must be positive");

    double max_abs = 0.0, max_asym = 0.0;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            max_abs = std::max(max_abs, std::abs(a_in(p, q)));
            max_asym = std::max(max_asym, std::abs(a_in(p, q) - a_in(q, p)));
        }
    if (max_asym > 1e-9 * std::max(max_abs, 1e-300))
        fail(ErrorCode::NotSymmetric, "asymmetry exceeds 1e-9 of the largest entry");

    Matrix a = a_in;
    Matrix v(d, d);
    for (int i = 0; i < d; ++i) v(i, i) = 1.0;

    const double threshold = tol * detail::frobenius_norm(a_in);
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (detail::max_abs_offdiag(a) > threshold) {
        if (sweep == kMaxSweeps)
            fail(ErrorCode::NoConvergence,
                 "Jacobi did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
        ++sweep;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < d; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p), arq = a(r, q);
                        a(r, p) = arp - s * (arq + tau * arp);
                        a(p, r) = a(r, p);
                        a(r, q) = arq + s * (arp - tau * arq);
                        a(q, r) = a(r, q);
                    }
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // Sort eigenpairs descending; ties keep diagonal order.
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenResult result;
    result.sweeps = sweep;
    result.values.resize(d);
    result.vectors = Matrix(d, d);
    for (int j = 0; j < d; ++j) {
        const int src = order[j];
        result.values[j] = a(src, src);
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(v(i, src)) > std::abs(v(arg, src))) arg = i;
        const double flip = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < d; ++i) result.vectors(i, j) = flip * v(i, src);
    }
    return result;
}

// ============================================================================
// PCA
// ============================================================================

struct PcaResult {
    std::vector<double> eigenvalues;          // descending, variance units
    Matrix eigenvectors;                      // d x d orthonormal, column-major pairing
    std::vector<double> explained_ratio;      // sums to 1
    std::vector<double> mean;                 // column means used for centering
    std::vector<std::string> sector_attribution; // component -> max-|loading| column label
};

/// Covariance PCA with explained-variance ratios and a per-component column
/// attribution (largest |loading| wins, ties to the earlier column).
inline PcaResult pca_fit(const FeatureMatrix& m, bool center = true) {
    const Matrix c = covariance(m.data, center);
    EigenResult eig = eigen_symmetric(c, 1e-12);

    const int d = c.rows();
    double trace = 0.0;
    for (int i = 0; i < d; ++i) trace += c(i, i);
    const double eps_eig = 1e-10 * trace;

    PcaResult result;
    result.eigenvalues = eig.values;
    result.eigenvectors = std::move(eig.vectors);

    std::vector<double> clamped = result.eigenvalues;
    for (double& v : clamped)
        if (v < 0.0 && v >= -eps_eig) v = 0.0;
    const double total = std::accumulate(clamped.begin(), clamped.end(), 0.0);
    if (total <= 0.0)
        fail(ErrorCode::ZeroVariance, "all eigenvalues are zero; no variance to explain");

    result.explained_ratio.resize(d);
    for (int j = 0; j < d; ++j) result.explained_ratio[j] = clamped[j] / total;

    result.mean.assign(d, 0.0);
    if (center) {
        for (int i = 0; i < m.data.rows(); ++i)
            for (int j = 0; j < d; ++j) result.mean[j] += m.data(i, j);
        for (double& v : result.mean) v /= static_cast<double>(m.data.rows());
    }

    result.sector_attribution.resize(d);
    for (int j = 0; j < d; ++j) {
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(result.eigenvectors(i, j)) > std::abs(result.eigenvectors(arg, j)))
                arg = i;
        result.sector_attribution[j] =
            arg < static_cast<int>(m.col_labels.size()) ? m.col_labels[arg] : std::to_string(arg);
    }
    return result;
}

/// Scores y_i = O_k^T (x_i - mean) for the first k components.
inline Matrix project(const PcaResult& r, const FeatureMatrix& m, int k) {
    const int d = r.eigenvectors.rows();
    if (k < 1 || k > d) fail(ErrorCode::KTooLarge, "k must lie in [1, d]");
    if (m.data.cols() != d) fail(ErrorCode::ShapeMismatch, "feature count differs from fit");

    Matrix scores(m.data.rows(), k);
    for (int i = 0; i < m.data.rows(); ++i) {
        const double* row = m.data.row(i);
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int f = 0; f < d; ++f) acc += (row[f] - r.mean[f]) * r.eigenvectors(f, j);
            scores(i, j) = acc;
        }
    }
    return scores;
}

/// Inverse of project: x_hat = O_k y + mean.
inline Matrix reconstruct(const PcaResult& r, const Matrix& scores) {
    const int d = r.eigenvectors.rows();
    const int k = scores.cols();
    if (k > d) fail(ErrorCode::KTooLarge, "more score columns than components");

    Matrix x(scores.rows(), d);
    for (int i = 0; i < scores.rows(); ++i) {
        for (int f = 0; f < d; ++f) {
            double acc = r.mean[f];
            for (int j = 0; j < k; ++j) acc += r.eigenvectors(f, j) * scores(i, j);
            x(i, f) = acc;
        }
    }
    return x;
}

} // namespace emicast

#endif // EMICAST_PCA_HPP

#ifndef EMICAST_PREPROCESS_HPP
#define EMICAST_PREPROCESS_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "emicast/core.hpp"

namespace emicast {

// ============================================================================
// Outlier cleaning
// ============================================================================

struct CleanResult {
    std::vector<double> cleaned;
    std::vector<std::size_t> flagged;
    bool degenerate = false; // SD was zero; input returned unchanged
};

inline double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

/// Population standard deviation (divisor n).
inline double population_sd(const std::vector<double>& v) {
    const double mu = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return v.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

/// Z-score outlier replacement. Scores are computed once on the input series;
/// flagged points (|z| > threshold) are replaced left to right by the value at
/// index i-1 of the partially cleaned series, so a flagged run collapses to
/// the last good value. A flagged index 0 takes the first unflagged value.
inline CleanResult clean_outliers(const std::vector<double>& series, double threshold) {
    if (series.size() < 2)
        fail(ErrorCode::SeriesTooShort, "clean_outliers needs at least 2 points");
    if (!(threshold > 0.0))
        fail(ErrorCode::BadArgument, "threshold must be positive");

    const double mu = mean_of(series);
    const double sd = population_sd(series);

    CleanResult result;
    result.cleaned = series;
    if (sd == 0.0) {
        result.degenerate = true; // warning, not failure
        return result;
    }

    std::vector<bool> is_flagged(series.size(), false);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double z = (series[i] - mu) / sd;
        if (std::abs(z) > threshold) {
            is_flagged[i] = true;
            result.flagged.push_back(i);
        }
    }

    for (std::size_t i : result.flagged) {
        if (i > 0) {
            result.cleaned[i] = result.cleaned[i - 1];
        } else {
            // first unflagged value; with threshold >= 1 one always exists
            // (sum of squared z-scores equals n)
            for (std::size_t j = 1; j < series.size(); ++j) {
                if (!is_flagged[j]) {
                    result.cleaned[0] = series[j];
                    break;
                }
            }
        }
    }
    return result;
}

// ============================================================================
// Smoothing
// ============================================================================

/// Trailing moving average: output[k] = mean(series[k .. k+window-1]), so the
/// result has length n - window + 1 and aligns with the window's last element.
/// Windows are summed directly rather than by a rolling update to keep
/// rounding independent of position.
inline std::vector<double> moving_average(const std::vector<double>& series, std::size_t window) {
    if (window < 1) fail(ErrorCode::BadArgument, "window must be >= 1");
    if (window > series.size())
        fail(ErrorCode::WindowTooLarge,
             "window " + std::to_string(window) + " > series length " +
                 std::to_string(series.size()));

    std::vector<double> out(series.size() - window + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < window; ++j) sum += series[k + j];
        out[k] = sum / static_cast<double>(window);
    }
    return out;
}

// ============================================================================
// Min-max scaling
// ============================================================================

struct Scaler {
    double min = 0.0;
    double max = 0.0;

    bool degenerate() const noexcept { return !(max > min); }
};

inline Scaler fit_scaler(const std::vector<double>& series) {
    if (series.empty()) fail(ErrorCode::EmptyInput, "cannot fit scaler on empty series");
    Scaler s{series[0], series[0]};
    for (double v : series) {
        if (!std::isfinite(v)) fail(ErrorCode::BadArgument, "non-finite value in series");
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    return s;
}

/// Map through (x - min)/(max - min). A degenerate scaler maps everything
/// to 0.5.
inline std::vector<double> apply_scale(const std::vector<double>& series, const Scaler& s) {
    std::vector<double> out(series.size());
    if (s.degenerate()) {
        for (double& v : out) v = 0.5;
        return out;
    }
    const double span = s.max - s.min;
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - s.min) / span;
    return out;
}

inline std::pair<std::vector<double>, Scaler> minmax_scale(const std::vector<double>& series) {
    Scaler s = fit_scaler(series);
    return {apply_scale(series, s), s};
}

inline std::vector<double> inverse_scale(const std::vector<double>& scaled, const Scaler& s) {
    if (s.degenerate())
        fail(ErrorCode::DegenerateScaler, "cannot invert a degenerate scaler");
    std::vector<double> out(scaled.size());
    const double span = s.max - s.min;
    for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = scaled[i] * span + s.min;
    return out;
}

inline double inverse_scale(double scaled, const Scaler& s) {
    if (s.degenerate())
        fail(ErrorCode::DegenerateScaler, "cannot invert a degenerate scaler");
    return scaled * (s.max - s.min) + s.min;
}

// ============================================================================
// Supervised windowing
// ============================================================================

/// inputs[k] is the window of seq_len consecutive values immediately
/// preceding targets[k].
struct SupervisedSet {
    Matrix inputs; // n_samples x seq_len
    std::vector<double> targets;
    int seq_len = 0;

    std::size_t size() const noexcept { return targets.size(); }
};

inline SupervisedSet make_supervised(const std::vector<double>& series, int seq_len) {
    if (seq_len < 1) fail(ErrorCode::BadArgument, "seq_len must be positive");
    if (series.size() < static_cast<std::size_t>(seq_len) + 1)
        fail(ErrorCode::SeriesTooShort,
             "need at least seq_len+1 = " + std::to_string(seq_len + 1) + " points, got " +
                 std::to_string(series.size()));

    const int n_samples = static_cast<int>(series.size()) - seq_len;
    SupervisedSet set;
    set.seq_len = seq_len;
    set.inputs = Matrix(n_samples, seq_len);
    set.targets.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        for (int j = 0; j < seq_len; ++j) set.inputs(k, j) = series[k + j];
        set.targets[k] = series[k + seq_len];
    }
    return set;
}

/// Chronological split: first floor(train_fraction * n) samples are train,
/// the rest test. No shuffling.
inline std::pair<SupervisedSet, SupervisedSet> train_test_split(const SupervisedSet& set,
                                                                double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        fail(ErrorCode::BadArgument, "train_fraction must lie in (0,1)");
    const std::size_t n = set.size();
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        fail(ErrorCode::EmptyPartition,
             "split of " + std::to_string(n) + " samples at fraction " +
                 std::to_string(train_fraction) + " leaves an empty partition");

    auto slice = [&](std::size_t begin, std::size_t end) {
        SupervisedSet part;
        part.seq_len = set.seq_len;
        part.inputs = Matrix(static_cast<int>(end - begin), set.seq_len);
        part.targets.assign(set.targets.begin() + static_cast<std::ptrdiff_t>(begin),
                            set.targets.begin() + static_cast<std::ptrdiff_t>(end));
        for (std::size_t k = begin; k < end; ++k)
            for (int j = 0; j < set.seq_len; ++j)
                part.inputs(static_cast<int>(k - begin), j) =
                    set.inputs(static_cast<int>(k), j);
        return part;
    };
    return {slice(0, n_train), slice(n_train, n)};
}

} // namespace emicast

#endif // EMICAST_PREPROCESS_HPP

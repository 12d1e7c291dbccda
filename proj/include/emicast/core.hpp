#ifndef EMICAST_CORE_HPP
#define EMICAST_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emicast {

// ============================================================================
// Errors
// ============================================================================

enum class ErrorCode {
    MalformedRow,
    DuplicateKey,
    UnknownSector,
    EmptyInput,
    InvalidRange,
    RaggedDates,
    UnknownRegion,
    WindowTooLarge,
    SeriesTooShort,
    EmptyPartition,
    DegenerateScaler,
    TooFewRows,
    NotSymmetric,
    NoConvergence,
    ZeroVariance,
    KTooLarge,
    ShapeMismatch,
    LengthMismatch,
    TooFewSamples,
    StaleCache,
    EmptyData,
    NonFiniteLoss,
    ZeroNormalization,
    BadWindow,
    BadArgument,
    BadConfig,
    IoError,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateKey: return "DuplicateKey";
        case ErrorCode::UnknownSector: return "UnknownSector";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::RaggedDates: return "RaggedDates";
        case ErrorCode::UnknownRegion: return "UnknownRegion";
        case ErrorCode::WindowTooLarge: return "WindowTooLarge";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::EmptyPartition: return "EmptyPartition";
        case ErrorCode::DegenerateScaler: return "DegenerateScaler";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::StaleCache: return "StaleCache";
        case ErrorCode::EmptyData: return "EmptyData";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::ZeroNormalization: return "ZeroNormalization";
        case ErrorCode::BadWindow: return "BadWindow";
        case ErrorCode::BadArgument: return "BadArgument";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// ============================================================================
// Dense row-major matrix
// ============================================================================

/// Minimal dense double matrix. Row-major storage, no views, no aliasing
/// tricks; the numeric modules do their own loops over row pointers.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            fail(ErrorCode::BadArgument, "matrix dimensions must be non-negative");
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// ============================================================================
// Deterministic RNG
// ============================================================================

/// mt19937_64 wrapper that derives all draws from raw bits, so streams are
/// reproducible across standard libraries (std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, bound) via rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) fail(ErrorCode::BadArgument, "Rng::below called with bound 0");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// ============================================================================
// Small shared helpers
// ============================================================================

inline bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// FNV-1a over a byte string; used for config/artifact fingerprints.
inline std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed = 1469598103934665603ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace emicast

#endif // EMICAST_CORE_HPP

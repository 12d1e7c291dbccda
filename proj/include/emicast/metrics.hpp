#ifndef EMICAST_METRICS_HPP
#define EMICAST_METRICS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "emicast/core.hpp"

namespace emicast {

enum class MetricUnits { Scaled, Original };

inline const char* metric_units_name(MetricUnits u) {
    return u == MetricUnits::Scaled ? "scaled" : "original";
}

struct MetricsReport {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0; // NaN when degenerate_variance
    std::size_t n = 0;
    MetricUnits units = MetricUnits::Scaled;
    bool degenerate_variance = false; // SS_T was zero, r2 undefined
};

/// MSE = (1/n) sum (y_A - y_P)^2, RMSE = sqrt(MSE),
/// MAE = (1/n) sum |y_A - y_P|, R^2 = 1 - SS_R/SS_T.
/// R^2 is reported as computed and can be negative.
inline MetricsReport evaluate(const std::vector<double>& actual,
                              const std::vector<double>& predicted,
                              MetricUnits units = MetricUnits::Scaled) {
    if (actual.size() != predicted.size())
        fail(ErrorCode::LengthMismatch,
             std::to_string(actual.size()) + " actual vs " + std::to_string(predicted.size()) +
                 " predicted");
    if (actual.size() < 2)
        fail(ErrorCode::TooFewSamples, "need at least 2 samples");

    const std::size_t n = actual.size();
    double ss_r = 0.0, abs_sum = 0.0, mean_a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i]))
            fail(ErrorCode::BadArgument, "non-finite value at index " + std::to_string(i));
        const double e = actual[i] - predicted[i];
        ss_r += e * e;
        abs_sum += std::abs(e);
        mean_a += actual[i];
    }
    mean_a /= static_cast<double>(n);

    double ss_t = 0.0;
    for (double a : actual) ss_t += (a - mean_a) * (a - mean_a);

    MetricsReport report;
    report.n = n;
    report.units = units;
    report.mse = ss_r / static_cast<double>(n);
    report.rmse = std::sqrt(report.mse);
    report.mae = abs_sum / static_cast<double>(n);
    if (ss_t == 0.0) {
        report.degenerate_variance = true;
        report.r2 = std::numeric_limits<double>::quiet_NaN();
    } else {
        report.r2 = 1.0 - ss_r / ss_t;
    }
    return report;
}

} // namespace emicast

#endif // EMICAST_METRICS_HPP

#ifndef DDOS_METRICS_HPP
#define DDOS_METRICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ddos {

// Goodness of fit between observed (Y_o) and computed (Y_c) series.
//
// r_squared and cc are undefined (nullopt) when the computed series is
// constant. nmse_eq11 divides MSE by the population variance of the
// observations; nmse_table2 divides MSE by their sample standard deviation
// (N - 1 divisor), which is the convention that reproduces published tables.
// mae_index is the efficiency score 1 - sum|Y_c - Y_o| / sum|Y_o - mean(Y_o)|,
// not a mean absolute error; the latter is mean_abs_error.
struct FitReport {
    std::optional<double> r_squared;
    std::optional<double> cc;
    double sse = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double nmse_eq11 = 0.0;
    double nmse_table2 = 0.0;
    double eta = 0.0;
    double mae_index = 0.0;
    double mean_abs_error = 0.0;
    std::size_t sample_count = 0;
};

// Residuals are predicted minus observed: positive means overestimate
// (false positive), negative means underestimate (false negative).
class ResidualSeries {
public:
    ResidualSeries() = default;
    explicit ResidualSeries(std::vector<double> residuals);

    const std::vector<double>& residuals() const { return residuals_; }
    std::size_t positive_count() const { return positive_; }
    std::size_t negative_count() const { return negative_; }
    std::size_t zero_count() const { return zero_; }
    std::size_t size() const { return residuals_.size(); }

    // Same data under observed-minus-predicted convention.
    ResidualSeries flipped() const;

private:
    std::vector<double> residuals_;
    std::size_t positive_ = 0;
    std::size_t negative_ = 0;
    std::size_t zero_ = 0;
};

struct ResidualSummary {
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    double max_abs = 0.0;
};

// Throws InputError on length mismatch or fewer than two samples and
// DegenerateError when every observation is equal.
FitReport evaluate(std::span<const double> observed, std::span<const double> computed);

// Throws InputError on an empty series.
ResidualSummary residual_summary(const ResidualSeries& residuals);

}  // namespace ddos

#endif  // DDOS_METRICS_HPP

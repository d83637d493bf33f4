#include "ddos/metrics.hpp"

#include "ddos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace ddos {

namespace {

bool all_equal(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

ResidualSeries::ResidualSeries(std::vector<double> residuals) : residuals_(std::move(residuals)) {
    for (double r : residuals_) {
        if (r > 0.0) {
            ++positive_;
        } else if (r < 0.0) {
            ++negative_;
        } else {
            ++zero_;
        }
    }
}

ResidualSeries ResidualSeries::flipped() const {
    std::vector<double> out(residuals_.size());
    std::transform(residuals_.begin(), residuals_.end(), out.begin(), [](double r) { return -r; });
    return ResidualSeries(std::move(out));
}

FitReport evaluate(std::span<const double> observed, std::span<const double> computed) {
    if (observed.size() != computed.size()) {
        throw InputError("observed and computed series differ in length (" + std::to_string(observed.size()) +
                         " vs " + std::to_string(computed.size()) + ")");
    }
    const std::size_t n = observed.size();
    if (n < 2) {
        throw InputError("goodness of fit needs at least two samples");
    }
    const auto nd = static_cast<double>(n);
    const double mean_o = std::accumulate(observed.begin(), observed.end(), 0.0) / nd;
    const double mean_c = std::accumulate(computed.begin(), computed.end(), 0.0) / nd;

    double s_oo = 0.0, s_cc = 0.0, s_oc = 0.0;
    double sse = 0.0, abs_err = 0.0, abs_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d_o = observed[i] - mean_o;
        const double d_c = computed[i] - mean_c;
        const double e = computed[i] - observed[i];
        s_oo += d_o * d_o;
        s_cc += d_c * d_c;
        s_oc += d_o * d_c;
        sse += e * e;
        abs_err += std::abs(e);
        abs_dev += std::abs(d_o);
    }
    if (all_equal(observed)) {
        throw DegenerateError("observed series has zero variance");
    }

    FitReport r;
    r.sample_count = n;
    if (!all_equal(computed)) {
        r.r_squared = (s_oc * s_oc) / (s_oo * s_cc);
        r.cc = s_oc / std::sqrt(s_oo * s_cc);
    }
    r.sse = sse;
    r.mse = sse / nd;
    r.rmse = std::sqrt(r.mse);
    r.nmse_eq11 = r.mse / (s_oo / nd);
    r.nmse_table2 = r.mse / std::sqrt(s_oo / (nd - 1.0));
    r.eta = 1.0 - sse / s_oo;
    r.mae_index = 1.0 - abs_err / abs_dev;
    r.mean_abs_error = abs_err / nd;
    return r;
}

ResidualSummary residual_summary(const ResidualSeries& residuals) {
    if (residuals.size() == 0) {
        throw InputError("residual summary of an empty series");
    }
    double max_abs = 0.0;
    for (double r : residuals.residuals()) {
        max_abs = std::max(max_abs, std::abs(r));
    }
    return {residuals.positive_count(), residuals.negative_count(), max_abs};
}

}  // namespace ddos

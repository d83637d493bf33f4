#include "ddos/fixtures.hpp"

#include <cmath>

namespace ddos {

namespace {

constexpr std::array<double, 19> kDeviation{0.149, 0.169, 0.184, 0.192, 0.199, 0.197, 0.195, 0.195, 0.208, 0.212,
                                            0.233, 0.241, 0.244, 0.253, 0.279, 0.280, 0.299, 0.296, 0.319};

constexpr std::array<Table2Row, 5> kTable2{{
    {ModelFamily::linear, 0.95, 0.97, 708.13, 37.27, 6.10, 1.32, 0.95, 0.78},
    {ModelFamily::polynomial, 0.96, 0.98, 566.31, 29.81, 5.46, 1.06, 0.96, 0.81},
    {ModelFamily::logarithmic, 0.96, 0.98, 596.96, 31.42, 5.61, 1.12, 0.96, 0.80},
    {ModelFamily::power, 0.89, 0.94, 2643.90, 139.15, 11.80, 4.95, 0.81, 0.59},
    {ModelFamily::exponential, 0.84, 0.92, 3995.70, 210.30, 14.50, 7.47, 0.72, 0.51},
}};

// Tolerances: error sums are relative because the published deviations are
// rounded to three decimals; ratio-type scores are absolute.
constexpr double kErrorSumRelTol = 0.05;
constexpr double kScoreAbsTol = 0.01;
constexpr double kLogLinearEtaAbsTol = 0.02;
constexpr double kNmseAbsTol = 0.05;

MetricCheck check(const std::string& model, std::string metric, double expected, double actual, double tol,
                  bool relative) {
    const double allowed = relative ? tol * std::abs(expected) : tol;
    return {model, std::move(metric), expected, actual, tol, relative, std::abs(actual - expected) <= allowed};
}

void check_row(std::vector<MetricCheck>& out, const std::string& model, const Table2Row& row, const FitReport& r) {
    const bool log_linear = row.family == ModelFamily::power || row.family == ModelFamily::exponential;
    out.push_back(check(model, "r2", row.r_squared, r.r_squared.value_or(NAN), kScoreAbsTol, false));
    out.push_back(check(model, "cc", row.cc, r.cc.value_or(NAN), kScoreAbsTol, false));
    out.push_back(check(model, "sse", row.sse, r.sse, kErrorSumRelTol, true));
    out.push_back(check(model, "mse", row.mse, r.mse, kErrorSumRelTol, true));
    out.push_back(check(model, "rmse", row.rmse, r.rmse, kErrorSumRelTol, true));
    out.push_back(check(model, "nmse", row.nmse, r.nmse_table2, kNmseAbsTol, false));
    out.push_back(check(model, "eta", row.eta, r.eta, log_linear ? kLogLinearEtaAbsTol : kScoreAbsTol, false));
    out.push_back(check(model, "mae_index", row.mae_index, r.mae_index, kScoreAbsTol, false));
}

}  // namespace

CalibrationDataset table1_dataset() {
    std::vector<CalibrationSample> samples;
    for (std::size_t i = 0; i < kDeviation.size(); ++i) {
        samples.push_back({kDeviation[i], 10.0 + 5.0 * static_cast<double>(i)});
    }
    return CalibrationDataset(std::move(samples));
}

std::span<const Table2Row> table2_expectations() {
    return kTable2;
}

bool Table2Reproduction::all_passed() const {
    if (!polynomial_degree || !best_is_polynomial) {
        return false;
    }
    for (const auto& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

Table2Reproduction reproduce_table2(std::span<const int> candidate_degrees) {
    const auto data = table1_dataset();
    const auto& poly_row = kTable2[1];

    Table2Reproduction out;
    for (int d : candidate_degrees) {
        const auto model = fit(data, ModelKind::of(ModelFamily::polynomial, d));
        const auto report = evaluate(data.ys(), predictions(model, data));
        out.polynomial_sse_by_degree.emplace_back(d, report.sse);
        if (!out.polynomial_degree && std::abs(report.sse - poly_row.sse) <= kErrorSumRelTol * poly_row.sse) {
            out.polynomial_degree = d;
        }
    }

    const int degree = out.polynomial_degree.value_or(kDefaultPolynomialDegree);
    out.report = compare_models(data, degree, SelectionCriterion::eta);
    for (const auto& row : kTable2) {
        const auto* outcome = out.report.find(row.family);
        const std::string name(to_string(row.family));
        if (outcome == nullptr || !outcome->report) {
            out.checks.push_back({name, "fit", 0.0, NAN, 0.0, false, false});
            continue;
        }
        check_row(out.checks, name, row, *outcome->report);
    }
    out.best_is_polynomial = out.report.best_model.family == ModelFamily::polynomial;
    return out;
}

}  // namespace ddos

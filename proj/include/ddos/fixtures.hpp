#ifndef DDOS_FIXTURES_HPP
#define DDOS_FIXTURES_HPP

#include "ddos/pipeline.hpp"
#include "ddos/regression.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ddos {

// Published calibration data: 19 (deviation, strength) pairs, 10..100 Mbps.
// Deviations are printed to three decimals.
CalibrationDataset table1_dataset();

// Published goodness-of-fit summary for one family.
struct Table2Row {
    ModelFamily family;
    double r_squared;
    double cc;
    double sse;
    double mse;
    double rmse;
    double nmse;  // MSE / sample std
    double eta;
    double mae_index;
};

std::span<const Table2Row> table2_expectations();

struct MetricCheck {
    std::string model;
    std::string metric;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool relative = false;  // tolerance is a fraction of expected
    bool pass = false;
};

struct Table2Reproduction {
    std::vector<MetricCheck> checks;
    // First degree whose SSE lands inside tolerance, if any.
    std::optional<int> polynomial_degree;
    std::vector<std::pair<int, double>> polynomial_sse_by_degree;
    ModelComparisonReport report;
    bool best_is_polynomial = false;

    bool all_passed() const;
};

// Fits the packaged calibration points, compares every family against the
// published error figures and checks that polynomial wins on eta.
Table2Reproduction reproduce_table2(std::span<const int> candidate_degrees = std::array{2, 3});

}  // namespace ddos

#endif  // DDOS_FIXTURES_HPP

#ifndef DDOS_PIPELINE_HPP
#define DDOS_PIPELINE_HPP

#include "ddos/detector.hpp"
#include "ddos/metrics.hpp"
#include "ddos/regression.hpp"
#include "ddos/traffic_sim.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddos {

enum class SelectionCriterion { eta, r_squared, sse };

std::string_view to_string(SelectionCriterion criterion);
std::optional<SelectionCriterion> parse_criterion(std::string_view name);

// Result of fitting and scoring one family. Exactly one of (model + report)
// or skip_reason is set.
struct ModelOutcome {
    ModelKind kind;
    std::optional<FittedModel> model;
    std::optional<FitReport> report;
    std::vector<double> predicted;
    std::optional<std::string> skip_reason;

    bool fitted() const { return model.has_value(); }
};

struct ModelComparisonReport {
    std::vector<ModelOutcome> outcomes;  // canonical family order
    ModelKind best_model;
    SelectionCriterion criterion = SelectionCriterion::eta;

    const ModelOutcome* find(ModelFamily family) const;
};

struct StrengthEstimate {
    std::uint64_t window_index = 0;
    double estimated_strength_mbps = 0.0;
    bool clamped = false;
    double deviation = 0.0;

    friend bool operator==(const StrengthEstimate&, const StrengthEstimate&) = default;
};

struct EstimationFailure {
    std::uint64_t window_index = 0;
    std::string reason;
};

struct EstimationResult {
    std::vector<StrengthEstimate> estimates;
    std::vector<EstimationFailure> failures;
};

// Entropy per window of a simulated series.
std::vector<EntropyValue> series_entropies(const FlowRecordSeries& series);
std::vector<DetectionEvent> detect_series(const FlowRecordSeries& series, const Baseline& baseline);

// Baseline from attack-free traffic.
Baseline baseline_from_series(const FlowRecordSeries& series, double threshold = kDefaultThreshold);

// One sample per run: x = mean deviation over the run's flagged windows,
// y = the run's label. Samples are ordered by y.
// Throws InsufficientDataError for a run with no windows or no flagged window.
CalibrationDataset calibrate(std::span<const LabeledRun> runs, const Baseline& baseline);

// Fits all five families and selects the best by criterion (ties go to the
// earlier family). Families whose fit fails are skipped with a reason.
// Throws DegenerateError if no family could be scored.
ModelComparisonReport compare_models(const CalibrationDataset& data,
                                     int polynomial_degree = kDefaultPolynomialDegree,
                                     SelectionCriterion criterion = SelectionCriterion::eta);

// Predicts strength for every flagged event; negative predictions clamp to 0.
// Out-of-domain deviations are recorded as failures and skipped.
EstimationResult estimate_strength(const FittedModel& model, std::span<const DetectionEvent> events);

}  // namespace ddos

#endif  // DDOS_PIPELINE_HPP

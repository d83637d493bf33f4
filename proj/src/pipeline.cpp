#include "ddos/pipeline.hpp"

#include "ddos/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ddos {

namespace {

constexpr double kTieTolerance = 1e-12;

bool ties(double a, double b) {
    return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

std::optional<double> score(const FitReport& r, SelectionCriterion c) {
    switch (c) {
        case SelectionCriterion::eta: return r.eta;
        case SelectionCriterion::r_squared: return r.r_squared;
        case SelectionCriterion::sse: return -r.sse;  // larger is better throughout
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(SelectionCriterion criterion) {
    switch (criterion) {
        case SelectionCriterion::eta: return "eta";
        case SelectionCriterion::r_squared: return "r_squared";
        case SelectionCriterion::sse: return "sse";
    }
    return "unknown";
}

std::optional<SelectionCriterion> parse_criterion(std::string_view name) {
    for (auto c : {SelectionCriterion::eta, SelectionCriterion::r_squared, SelectionCriterion::sse}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

const ModelOutcome* ModelComparisonReport::find(ModelFamily family) const {
    for (const auto& o : outcomes) {
        if (o.kind.family == family) {
            return &o;
        }
    }
    return nullptr;
}

std::vector<EntropyValue> series_entropies(const FlowRecordSeries& series) {
    const auto windows =
        windowize(series.records, series.metadata.config.window_length, series.metadata.config.num_windows);
    std::vector<EntropyValue> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        out.push_back(compute_entropy(w));
    }
    return out;
}

std::vector<DetectionEvent> detect_series(const FlowRecordSeries& series, const Baseline& baseline) {
    const auto windows =
        windowize(series.records, series.metadata.config.window_length, series.metadata.config.num_windows);
    return detect(windows, baseline);
}

Baseline baseline_from_series(const FlowRecordSeries& series, double threshold) {
    return build_baseline(series_entropies(series), threshold);
}

CalibrationDataset calibrate(std::span<const LabeledRun> runs, const Baseline& baseline) {
    std::vector<CalibrationSample> samples;
    samples.reserve(runs.size());
    for (const auto& run : runs) {
        if (run.series.records.empty()) {
            throw InsufficientDataError("run labeled " + std::to_string(run.strength_mbps) + " Mbps has no windows");
        }
        double sum = 0.0;
        std::size_t flagged = 0;
        for (const auto& e : detect_series(run.series, baseline)) {
            if (e.attack) {
                sum += e.deviation;
                ++flagged;
            }
        }
        if (flagged == 0) {
            throw InsufficientDataError("run labeled " + std::to_string(run.strength_mbps) +
                                        " Mbps has no window above the detection threshold");
        }
        samples.push_back({sum / static_cast<double>(flagged), run.strength_mbps});
    }
    std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.y < b.y; });
    return CalibrationDataset(std::move(samples));
}

ModelComparisonReport compare_models(const CalibrationDataset& data, int polynomial_degree,
                                     SelectionCriterion criterion) {
    ModelComparisonReport report;
    report.criterion = criterion;
    const auto observed = data.ys();

    for (auto family : kAllFamilies) {
        ModelOutcome outcome;
        outcome.kind = ModelKind::of(family, polynomial_degree);
        try {
            auto model = fit(data, outcome.kind);
            outcome.predicted = predictions(model, data);
            outcome.report = evaluate(observed, outcome.predicted);
            outcome.model = std::move(model);
        } catch (const Error& e) {
            outcome.predicted.clear();
            outcome.report.reset();
            outcome.skip_reason = e.what();
        }
        report.outcomes.push_back(std::move(outcome));
    }

    std::optional<double> best;
    for (const auto& o : report.outcomes) {
        if (!o.report) {
            continue;
        }
        const auto s = score(*o.report, criterion);
        if (!s) {
            continue;
        }
        if (!best || (*s > *best && !ties(*s, *best))) {
            best = s;
            report.best_model = o.kind;
        }
    }
    if (!best) {
        throw DegenerateError("no model family could be fitted and scored on this dataset");
    }
    return report;
}

EstimationResult estimate_strength(const FittedModel& model, std::span<const DetectionEvent> events) {
    EstimationResult result;
    for (const auto& e : events) {
        if (!e.attack) {
            continue;
        }
        try {
            const double raw = predict(model, e.deviation);
            const bool clamped = raw < 0.0;
            result.estimates.push_back({e.window_index, clamped ? 0.0 : raw, clamped, e.deviation});
        } catch (const DomainError& err) {
            result.failures.push_back({e.window_index, err.what()});
        }
    }
    return result;
}

}  // namespace ddos

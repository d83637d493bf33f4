#include "ddos/detector.hpp"

#include "ddos/errors.hpp"

#include <cmath>

namespace ddos {

Baseline build_baseline(std::span<const EntropyValue> entropies, double threshold) {
    if (!std::isfinite(threshold) || threshold < 0.0) {
        throw ConfigError("detection threshold must be a non-negative number");
    }
    if (entropies.size() < kMinBaselineWindows) {
        throw InsufficientDataError("baseline needs at least " + std::to_string(kMinBaselineWindows) +
                                    " attack-free windows, got " + std::to_string(entropies.size()));
    }
    double sum = 0.0;
    for (const auto& e : entropies) {
        sum += e.value;
    }
    return {sum / static_cast<double>(entropies.size()), threshold, entropies.size()};
}

DetectionEvent evaluate_window(std::uint64_t window_index, EntropyValue h_c, const Baseline& baseline) {
    const double deviation = h_c.value - baseline.h_n;
    return {window_index, h_c.value, deviation, deviation > baseline.threshold};
}

std::vector<DetectionEvent> detect(std::span<const WindowCounts> windows, const Baseline& baseline) {
    std::vector<DetectionEvent> events;
    events.reserve(windows.size());
    for (const auto& w : windows) {
        events.push_back(evaluate_window(w.window_index(), compute_entropy(w), baseline));
    }
    return events;
}

}  // namespace ddos

#ifndef DDOS_DETECTOR_HPP
#define DDOS_DETECTOR_HPP

#include "ddos/entropy.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ddos {

inline constexpr double kDefaultThreshold = 0.1;  // bits
inline constexpr std::size_t kMinBaselineWindows = 5;

// Normal-profile entropy H_n and the deviation threshold that flags an attack.
struct Baseline {
    double h_n = 0.0;
    double threshold = kDefaultThreshold;
    std::size_t training_windows = 0;
};

struct DetectionEvent {
    std::uint64_t window_index = 0;
    double h_c = 0.0;
    double deviation = 0.0;  // h_c - h_n, signed
    bool attack = false;

    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

// h_n is the arithmetic mean of the training entropies.
// Throws InsufficientDataError below kMinBaselineWindows windows and
// ConfigError for a negative or non-finite threshold.
Baseline build_baseline(std::span<const EntropyValue> entropies, double threshold = kDefaultThreshold);

// One-sided test: attack iff deviation > threshold (a deviation equal to the
// threshold does not flag).
DetectionEvent evaluate_window(std::uint64_t window_index, EntropyValue h_c, const Baseline& baseline);

std::vector<DetectionEvent> detect(std::span<const WindowCounts> windows, const Baseline& baseline);

}  // namespace ddos

#endif  // DDOS_DETECTOR_HPP

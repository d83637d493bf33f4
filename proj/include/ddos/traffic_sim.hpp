#ifndef DDOS_TRAFFIC_SIM_HPP
#define DDOS_TRAFFIC_SIM_HPP

#include "ddos/entropy.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddos {

// Flow-level stand-in for a packet simulator. Legitimate clients emit a
// Poisson number of packets per window; zombies emit a constant byte volume
// per window (UDP-style constant-rate flood).
struct ScenarioConfig {
    std::uint32_t legit_clients = 400;
    std::uint32_t zombies = 100;
    double attack_rate_mbps_per_zombie = 0.0;
    double legit_mean_rate_mbps_per_client = 0.05;
    WindowLength window_length = kDefaultWindowLength;
    std::uint32_t num_windows = 50;
    std::uint64_t seed = 42;
    std::uint32_t packet_bytes = 1000;
    // Each attack packet carries a forged source id, so every packet is a
    // distinct flow. When false each zombie is a single flow.
    bool spoof_sources = true;

    // Throws ConfigError.
    void validate() const;

    // Byte volumes per window, rounded to whole bytes.
    double legit_mean_bytes_per_window() const;
    std::uint64_t attack_bytes_per_zombie_window() const;
    double aggregate_attack_mbps() const { return attack_rate_mbps_per_zombie * zombies; }
};

enum class FlowRole { legit, attack };

std::string_view to_string(FlowRole role);

struct SeriesMetadata {
    ScenarioConfig config;
    std::string generator;
    std::uint64_t seed = 0;
    std::map<std::string, FlowRole> roles;
};

struct FlowRecordSeries {
    std::vector<FlowRecord> records;  // sorted by window_index
    SeriesMetadata metadata;
};

struct LabeledRun {
    double strength_mbps = 0.0;
    FlowRecordSeries series;
};

inline constexpr std::string_view kGeneratorName = "std::mt19937_64+std::poisson_distribution";

// Deterministic in cfg (including seed). Throws ConfigError for an invalid
// config or when per-window byte counters would overflow.
FlowRecordSeries simulate(const ScenarioConfig& cfg);

// Seed for the index-th run of a sweep.
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t index);

// One run per aggregate strength; per-zombie rate = strength / zombies.
// Throws ConfigError on zero zombies or a non-positive strength.
std::vector<LabeledRun> sweep(const ScenarioConfig& base, std::span<const double> aggregate_strengths_mbps);

// 10, 15, ..., 100 Mbps.
std::vector<double> default_strengths();

}  // namespace ddos

#endif  // DDOS_TRAFFIC_SIM_HPP

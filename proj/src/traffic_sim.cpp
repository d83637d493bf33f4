#include "ddos/traffic_sim.hpp"

#include "ddos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ddos {

namespace {

// Largest per-window byte volume we accept for any single quantity; keeps
// sums of a few thousand flows well inside int64.
constexpr double kMaxBytesPerWindow = 1e15;
constexpr std::uint64_t kMaxRecords = std::uint64_t{1} << 31;

// bytes per window for a rate in Mbps: rate * 1e6 bit/s * (ms / 1000) / 8
double bytes_per_window(double rate_mbps, WindowLength length) {
    return rate_mbps * static_cast<double>(length.count()) * 125.0;
}

std::string client_id(std::uint32_t i) {
    std::string digits = std::to_string(i);
    if (digits.size() < 3) {
        digits.insert(0, 3 - digits.size(), '0');
    }
    return "c" + digits;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(FlowRole role) {
    return role == FlowRole::legit ? "legit" : "attack";
}

void ScenarioConfig::validate() const {
    if (legit_clients == 0) {
        throw ConfigError("legit_clients must be positive");
    }
    if (!std::isfinite(attack_rate_mbps_per_zombie) || attack_rate_mbps_per_zombie < 0.0) {
        throw ConfigError("attack rate per zombie must be a non-negative number");
    }
    if (!std::isfinite(legit_mean_rate_mbps_per_client) || legit_mean_rate_mbps_per_client <= 0.0) {
        throw ConfigError("legit mean rate per client must be positive");
    }
    if (window_length.count() <= 0) {
        throw ConfigError("window length must be positive");
    }
    if (num_windows == 0) {
        throw ConfigError("num_windows must be positive");
    }
    if (packet_bytes == 0) {
        throw ConfigError("packet_bytes must be positive");
    }
    if (bytes_per_window(attack_rate_mbps_per_zombie, window_length) * zombies > kMaxBytesPerWindow) {
        throw ConfigError("attack byte counter overflow: aggregate attack volume per window too large");
    }
    // Poisson tail headroom of 10x the mean.
    if (legit_mean_bytes_per_window() * 10.0 > kMaxBytesPerWindow) {
        throw ConfigError("legit byte counter overflow: per-client volume per window too large");
    }
    const std::uint64_t attack_bytes = attack_bytes_per_zombie_window();
    const std::uint64_t flows_per_zombie =
        attack_bytes == 0 ? 0 : (spoof_sources ? (attack_bytes + packet_bytes - 1) / packet_bytes : 1);
    const double records = (static_cast<double>(flows_per_zombie) * zombies + legit_clients) * num_windows;
    if (records > static_cast<double>(kMaxRecords)) {
        throw ConfigError("scenario would produce more than 2^31 flow records");
    }
}

double ScenarioConfig::legit_mean_bytes_per_window() const {
    return bytes_per_window(legit_mean_rate_mbps_per_client, window_length);
}

std::uint64_t ScenarioConfig::attack_bytes_per_zombie_window() const {
    return static_cast<std::uint64_t>(std::llround(bytes_per_window(attack_rate_mbps_per_zombie, window_length)));
}

FlowRecordSeries simulate(const ScenarioConfig& cfg) {
    cfg.validate();

    FlowRecordSeries series;
    series.metadata.config = cfg;
    series.metadata.generator = std::string(kGeneratorName);
    series.metadata.seed = cfg.seed;

    std::vector<std::string> clients;
    clients.reserve(cfg.legit_clients);
    for (std::uint32_t i = 0; i < cfg.legit_clients; ++i) {
        clients.push_back(client_id(i));
        series.metadata.roles.emplace(clients.back(), FlowRole::legit);
    }

    // Attack flows and their per-window volumes; identical in every window.
    std::vector<std::pair<std::string, std::int64_t>> attack;
    const std::uint64_t per_zombie = cfg.attack_bytes_per_zombie_window();
    if (per_zombie > 0) {
        for (std::uint32_t z = 0; z < cfg.zombies; ++z) {
            if (!cfg.spoof_sources) {
                attack.emplace_back("z" + std::to_string(z), static_cast<std::int64_t>(per_zombie));
                continue;
            }
            std::uint64_t remaining = per_zombie;
            for (std::uint64_t k = 0; remaining > 0; ++k) {
                const std::uint64_t size = std::min<std::uint64_t>(remaining, cfg.packet_bytes);
                attack.emplace_back("s" + std::to_string(z) + "." + std::to_string(k), static_cast<std::int64_t>(size));
                remaining -= size;
            }
        }
        for (const auto& [id, bytes] : attack) {
            series.metadata.roles.emplace(id, FlowRole::attack);
        }
    }

    std::mt19937_64 rng(cfg.seed);
    std::poisson_distribution<std::int64_t> packets(cfg.legit_mean_bytes_per_window() / cfg.packet_bytes);
    series.records.reserve(static_cast<std::size_t>(cfg.num_windows) * (clients.size() + attack.size()));
    for (std::uint32_t w = 0; w < cfg.num_windows; ++w) {
        for (const auto& id : clients) {
            const std::int64_t k = packets(rng);
            if (k > 0) {
                series.records.push_back({w, id, k * static_cast<std::int64_t>(cfg.packet_bytes)});
            }
        }
        for (const auto& [id, bytes] : attack) {
            series.records.push_back({w, id, bytes});
        }
    }
    return series;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t index) {
    return splitmix64(base_seed ^ ((static_cast<std::uint64_t>(index) + 1) * 0x9e3779b97f4a7c15ULL));
}

std::vector<LabeledRun> sweep(const ScenarioConfig& base, std::span<const double> aggregate_strengths_mbps) {
    if (base.zombies == 0) {
        throw ConfigError("sweep needs at least one zombie to carry a positive attack strength");
    }
    std::vector<LabeledRun> runs;
    runs.reserve(aggregate_strengths_mbps.size());
    for (std::size_t i = 0; i < aggregate_strengths_mbps.size(); ++i) {
        const double strength = aggregate_strengths_mbps[i];
        if (!std::isfinite(strength) || strength <= 0.0) {
            throw ConfigError("sweep strengths must be positive, got " + std::to_string(strength));
        }
        ScenarioConfig cfg = base;
        cfg.attack_rate_mbps_per_zombie = strength / base.zombies;
        cfg.seed = derive_seed(base.seed, i);
        runs.push_back({strength, simulate(cfg)});
    }
    return runs;
}

std::vector<double> default_strengths() {
    std::vector<double> s;
    for (int mbps = 10; mbps <= 100; mbps += 5) {
        s.push_back(mbps);
    }
    return s;
}

}  // namespace ddos

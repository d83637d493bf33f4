#include "ddos/entropy.hpp"

#include "ddos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddos {

namespace {

void add_checked(std::uint64_t& acc, std::uint64_t value) {
    if (value > std::numeric_limits<std::uint64_t>::max() - acc) {
        throw InputError("byte counter overflow");
    }
    acc += value;
}

}  // namespace

WindowCounts::WindowCounts(std::uint64_t window_index, WindowLength length,
                           std::map<std::string, std::uint64_t> counts)
    : window_index_(window_index), length_(length) {
    if (length.count() <= 0) {
        throw InputError("window length must be positive");
    }
    std::erase_if(counts, [](const auto& kv) { return kv.second == 0; });
    for (const auto& [flow, bytes] : counts) {
        if (flow.empty()) {
            throw InputError("empty flow id in window " + std::to_string(window_index));
        }
        add_checked(total_, bytes);
    }
    counts_ = std::move(counts);
}

EntropyValue compute_entropy(const WindowCounts& window) {
    const std::size_t n = window.flow_count();
    if (n <= 1) {
        return {0.0, n};
    }
    const auto total = static_cast<double>(window.total());
    double h = 0.0;
    for (const auto& [flow, bytes] : window.counts()) {
        const double p = static_cast<double>(bytes) / total;
        h -= p * std::log2(p);
    }
    return {std::clamp(h, 0.0, std::log2(static_cast<double>(n))), n};
}

std::vector<WindowCounts> windowize(std::span<const FlowRecord> records, WindowLength length,
                                    std::optional<std::size_t> window_count) {
    if (length.count() <= 0) {
        throw InputError("window length must be positive");
    }
    if (records.empty() && !window_count) {
        return {};
    }

    std::uint64_t first = 0;
    std::uint64_t last = 0;
    if (window_count) {
        if (*window_count == 0) {
            throw InputError("window count must be positive");
        }
        last = *window_count - 1;
    } else {
        auto [lo, hi] = std::minmax_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
            return a.window_index < b.window_index;
        });
        first = lo->window_index;
        last = hi->window_index;
    }

    std::vector<std::map<std::string, std::uint64_t>> buckets(last - first + 1);
    for (const auto& r : records) {
        if (r.bytes < 0) {
            throw InputError("negative byte count for flow '" + r.flow_id + "' in window " +
                             std::to_string(r.window_index));
        }
        if (r.flow_id.empty()) {
            throw InputError("empty flow id in window " + std::to_string(r.window_index));
        }
        if (r.window_index < first || r.window_index > last) {
            throw InputError("window index " + std::to_string(r.window_index) + " outside [0, " +
                             std::to_string(last) + "]");
        }
        add_checked(buckets[r.window_index - first][r.flow_id], static_cast<std::uint64_t>(r.bytes));
    }

    std::vector<WindowCounts> windows;
    windows.reserve(buckets.size());
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        windows.emplace_back(first + i, length, std::move(buckets[i]));
    }
    return windows;
}

double normalized_entropy(const WindowCounts& window) {
    const std::size_t n = window.flow_count();
    if (n < 2) {
        throw DegenerateError("normalized entropy needs at least two flows, window " +
                              std::to_string(window.window_index()) + " has " + std::to_string(n));
    }
    return compute_entropy(window).value / std::log2(static_cast<double>(n));
}

}  // namespace ddos

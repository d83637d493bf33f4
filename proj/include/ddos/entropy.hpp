#ifndef DDOS_ENTROPY_HPP
#define DDOS_ENTROPY_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ddos {

using WindowLength = std::chrono::milliseconds;

inline constexpr WindowLength kDefaultWindowLength{200};

// One observation of bytes for a flow inside a tumbling window. Bytes are
// signed so that malformed input can be represented and rejected.
struct FlowRecord {
    std::uint64_t window_index = 0;
    std::string flow_id;
    std::int64_t bytes = 0;

    friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

// Per-flow byte totals for one window. Zero-byte flows are never stored and
// total() always equals the sum of counts().
class WindowCounts {
public:
    WindowCounts(std::uint64_t window_index, WindowLength length,
                 std::map<std::string, std::uint64_t> counts = {});

    std::uint64_t window_index() const { return window_index_; }
    WindowLength window_length() const { return length_; }
    const std::map<std::string, std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    std::size_t flow_count() const { return counts_.size(); }
    bool empty() const { return counts_.empty(); }

private:
    std::uint64_t window_index_;
    WindowLength length_;
    std::map<std::string, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct EntropyValue {
    double value = 0.0;  // bits
    std::size_t flow_count = 0;
};

// Shannon entropy (base 2) of the byte distribution across flows:
// H = -sum p_i log2 p_i with p_i = n_i / S. An empty window has H = 0.
// The result is clamped into [0, log2 N] to absorb rounding.
EntropyValue compute_entropy(const WindowCounts& window);

// Groups records into tumbling windows. Bytes of the same (window, flow) are
// summed and windows without records are emitted empty, from the smallest
// window index present up to the largest. If window_count is given, output
// covers [0, window_count) and records beyond it are rejected.
// Throws InputError on negative bytes or an empty flow id.
std::vector<WindowCounts> windowize(std::span<const FlowRecord> records, WindowLength length,
                                    std::optional<std::size_t> window_count = std::nullopt);

// H / log2(N). Throws DegenerateError for fewer than two flows.
double normalized_entropy(const WindowCounts& window);

}  // namespace ddos

#endif  // DDOS_ENTROPY_HPP

#ifndef DDOS_IO_HPP
#define DDOS_IO_HPP

#include "ddos/detector.hpp"
#include "ddos/entropy.hpp"
#include "ddos/pipeline.hpp"
#include "ddos/regression.hpp"
#include "ddos/traffic_sim.hpp"

#include <filesystem>
#include "json.hpp"
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddos::io {

namespace fs = std::filesystem;

// Shortest decimal form that round-trips the double (at most 17 significant digits).
std::string format_double(double value);
// Fixed two-decimal rendering for report tables.
std::string format_fixed2(double value);

// Writes to a sibling temp file and renames it over path.
void write_atomic(const fs::path& path, std::string_view content);
std::string read_file(const fs::path& path);

// All readers throw InputError naming the file and line of the first bad row.

// window_index,flow_id,bytes
std::string flow_records_csv(std::span<const FlowRecord> records);
std::vector<FlowRecord> parse_flow_records_csv(std::string_view text, std::string_view source = "<memory>");
void write_flow_records(const fs::path& path, std::span<const FlowRecord> records);
std::vector<FlowRecord> read_flow_records(const fs::path& path);

nlohmann::json metadata_to_json(const SeriesMetadata& metadata);
SeriesMetadata metadata_from_json(const nlohmann::json& j);
void write_series(const fs::path& csv_path, const FlowRecordSeries& series);  // CSV + "<csv>.meta.json"
FlowRecordSeries read_series(const fs::path& csv_path);
fs::path metadata_path_for(const fs::path& csv_path);

// window_index,h_c,deviation,attack_flag
std::string detection_events_csv(std::span<const DetectionEvent> events);
std::vector<DetectionEvent> parse_detection_events_csv(std::string_view text, std::string_view source = "<memory>");

// deviation,strength_mbps
std::string calibration_csv(const CalibrationDataset& data);
CalibrationDataset parse_calibration_csv(std::string_view text, std::string_view source = "<memory>");
CalibrationDataset read_calibration(const fs::path& path);

nlohmann::json baseline_to_json(const Baseline& baseline, WindowLength window_length);
Baseline baseline_from_json(const nlohmann::json& j);

// created_at is an ISO-8601 UTC timestamp; pass an empty string to omit it.
nlohmann::json model_to_json(const FittedModel& model, std::string_view created_at);
FittedModel model_from_json(const nlohmann::json& j);
void save_model(const fs::path& path, const FittedModel& model);
FittedModel load_model(const fs::path& path);
std::string utc_timestamp();

// model,r2,cc,sse,mse,rmse,nmse_eq11,nmse_table2,eta,mae_index
// CSV values are rounded to two decimals; undefined r2/cc are empty fields.
std::string fit_report_row(std::string_view model, const FitReport& report);
std::string fit_reports_csv(const ModelComparisonReport& report);
nlohmann::json fit_report_to_json(const FitReport& report);
nlohmann::json comparison_to_json(const ModelComparisonReport& report);

struct FitReportRow {
    std::string model;
    FitReport report;
};
std::vector<FitReportRow> parse_fit_reports_csv(std::string_view text, std::string_view source = "<memory>");

// model,x,observed,predicted,residual (tidy, for plotting)
std::string predictions_csv(const ModelComparisonReport& report, const CalibrationDataset& data);

// window_index,deviation,estimate_mbps,clamped
std::string estimates_csv(std::span<const StrengthEstimate> estimates);
std::vector<StrengthEstimate> parse_estimates_csv(std::string_view text, std::string_view source = "<memory>");

}  // namespace ddos::io

#endif  // DDOS_IO_HPP

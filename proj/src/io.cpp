#include "ddos/io.hpp"

#include "ddos/errors.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace ddos::io {

using nlohmann::json;

namespace {

constexpr std::string_view kFlowHeader = "window_index,flow_id,bytes";
constexpr std::string_view kEventHeader = "window_index,h_c,deviation,attack_flag";
constexpr std::string_view kCalibrationHeader = "deviation,strength_mbps";
constexpr std::string_view kReportHeader = "model,r2,cc,sse,mse,rmse,nmse_eq11,nmse_table2,eta,mae_index";
constexpr std::string_view kPredictionHeader = "model,x,observed,predicted,residual";
constexpr std::string_view kEstimateHeader = "window_index,deviation,estimate_mbps,clamped";

struct Line {
    std::size_t number;
    std::string_view text;
};

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

std::vector<Line> lines_of(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back({number, line});
        if (nl == std::string_view::npos) {
            break;
        }
        text.remove_prefix(nl + 1);
    }
    while (!out.empty() && out.back().text.empty()) {
        out.pop_back();
    }
    return out;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) {
            return fields;
        }
        line.remove_prefix(comma + 1);
    }
}

// Validates the header and returns the data rows split into exactly `width` fields.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows_of(std::string_view text,
                                                                           std::string_view source,
                                                                           std::string_view header) {
    const auto lines = lines_of(text);
    if (lines.empty()) {
        fail(source, 1, "missing header, expected '" + std::string(header) + "'");
    }
    if (lines.front().text != header) {
        fail(source, 1, "unexpected header '" + std::string(lines.front().text) + "', expected '" +
                            std::string(header) + "'");
    }
    const auto width = split(header).size();
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto fields = split(lines[i].text);
        if (fields.size() != width) {
            fail(source, lines[i].number,
                 "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        }
        rows.emplace_back(lines[i].number, std::move(fields));
    }
    return rows;
}

template <typename T>
T parse_number(std::string_view field, std::string_view source, std::size_t line, std::string_view what) {
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last) {
        fail(source, line, "invalid " + std::string(what) + " '" + std::string(field) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            fail(source, line, "non-finite " + std::string(what));
        }
    }
    return value;
}

bool parse_bool(std::string_view field, std::string_view source, std::size_t line, std::string_view what) {
    if (field == "true" || field == "1") {
        return true;
    }
    if (field == "false" || field == "0") {
        return false;
    }
    fail(source, line, "invalid " + std::string(what) + " '" + std::string(field) + "'");
}

std::string_view bool_text(bool b) {
    return b ? "true" : "false";
}

std::string optional_fixed2(const std::optional<double>& v) {
    return v ? format_fixed2(*v) : std::string();
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        throw InputError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad field '") + key + "': " + e.what());
    }
}

json parse_json(std::string_view text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": " + e.what());
    }
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_fixed2(double value) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", value);
    return buf.data();
}

void write_atomic(const fs::path& path, std::string_view content) {
    static std::uint64_t counter = 0;
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InputError("cannot open " + tmp.string() + " for writing");
        }
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw InputError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InputError("cannot move output into place at " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string flow_records_csv(std::span<const FlowRecord> records) {
    std::string out(kFlowHeader);
    out += '\n';
    for (const auto& r : records) {
        if (r.flow_id.empty() || r.flow_id.find_first_of(",\r\n") != std::string::npos) {
            throw InputError("flow id '" + r.flow_id + "' cannot be written to CSV");
        }
        out += std::to_string(r.window_index);
        out += ',';
        out += r.flow_id;
        out += ',';
        out += std::to_string(r.bytes);
        out += '\n';
    }
    return out;
}

std::vector<FlowRecord> parse_flow_records_csv(std::string_view text, std::string_view source) {
    std::vector<FlowRecord> records;
    for (const auto& [line, f] : rows_of(text, source, kFlowHeader)) {
        FlowRecord r;
        r.window_index = parse_number<std::uint64_t>(f[0], source, line, "window_index");
        if (f[1].empty()) {
            fail(source, line, "empty flow_id");
        }
        r.flow_id = std::string(f[1]);
        r.bytes = parse_number<std::int64_t>(f[2], source, line, "bytes");
        if (r.bytes < 0) {
            fail(source, line, "negative byte count " + std::to_string(r.bytes));
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_flow_records(const fs::path& path, std::span<const FlowRecord> records) {
    write_atomic(path, flow_records_csv(records));
}

std::vector<FlowRecord> read_flow_records(const fs::path& path) {
    return parse_flow_records_csv(read_file(path), path.string());
}

json metadata_to_json(const SeriesMetadata& m) {
    const auto& c = m.config;
    json flows = json::object();
    for (const auto& [id, role] : m.roles) {
        flows[id] = to_string(role);
    }
    return json{
        {"generator", m.generator},
        {"seed", m.seed},
        {"config",
         {{"legit_clients", c.legit_clients},
          {"zombies", c.zombies},
          {"attack_rate_mbps_per_zombie", c.attack_rate_mbps_per_zombie},
          {"legit_mean_rate_mbps_per_client", c.legit_mean_rate_mbps_per_client},
          {"window_length_ms", c.window_length.count()},
          {"num_windows", c.num_windows},
          {"seed", c.seed},
          {"packet_bytes", c.packet_bytes},
          {"spoof_sources", c.spoof_sources}}},
        {"flows", std::move(flows)},
    };
}

SeriesMetadata metadata_from_json(const json& j) {
    SeriesMetadata m;
    m.generator = require<std::string>(j, "generator");
    m.seed = require<std::uint64_t>(j, "seed");
    const json& c = j.at("config");
    m.config.legit_clients = require<std::uint32_t>(c, "legit_clients");
    m.config.zombies = require<std::uint32_t>(c, "zombies");
    m.config.attack_rate_mbps_per_zombie = require<double>(c, "attack_rate_mbps_per_zombie");
    m.config.legit_mean_rate_mbps_per_client = require<double>(c, "legit_mean_rate_mbps_per_client");
    m.config.window_length = WindowLength(require<std::int64_t>(c, "window_length_ms"));
    m.config.num_windows = require<std::uint32_t>(c, "num_windows");
    m.config.seed = require<std::uint64_t>(c, "seed");
    m.config.packet_bytes = require<std::uint32_t>(c, "packet_bytes");
    m.config.spoof_sources = require<bool>(c, "spoof_sources");
    if (j.contains("flows")) {
        for (const auto& [id, role] : j.at("flows").items()) {
            const auto text = role.get<std::string>();
            if (text != "legit" && text != "attack") {
                throw InputError("unknown flow role '" + text + "' for flow " + id);
            }
            m.roles.emplace(id, text == "legit" ? FlowRole::legit : FlowRole::attack);
        }
    }
    return m;
}

fs::path metadata_path_for(const fs::path& csv_path) {
    fs::path p = csv_path;
    p += ".meta.json";
    return p;
}

void write_series(const fs::path& csv_path, const FlowRecordSeries& series) {
    write_flow_records(csv_path, series.records);
    write_atomic(metadata_path_for(csv_path), metadata_to_json(series.metadata).dump(2) + "\n");
}

FlowRecordSeries read_series(const fs::path& csv_path) {
    FlowRecordSeries s;
    s.records = read_flow_records(csv_path);
    const auto meta_path = metadata_path_for(csv_path);
    try {
        s.metadata = metadata_from_json(parse_json(read_file(meta_path), meta_path.string()));
    } catch (const InputError& e) {
        throw InputError(meta_path.string() + ": " + e.what());
    }
    return s;
}

std::string detection_events_csv(std::span<const DetectionEvent> events) {
    std::string out(kEventHeader);
    out += '\n';
    for (const auto& e : events) {
        out += std::to_string(e.window_index) + ',' + format_double(e.h_c) + ',' + format_double(e.deviation) + ',' +
               std::string(bool_text(e.attack)) + '\n';
    }
    return out;
}

std::vector<DetectionEvent> parse_detection_events_csv(std::string_view text, std::string_view source) {
    std::vector<DetectionEvent> events;
    for (const auto& [line, f] : rows_of(text, source, kEventHeader)) {
        events.push_back({parse_number<std::uint64_t>(f[0], source, line, "window_index"),
                          parse_number<double>(f[1], source, line, "h_c"),
                          parse_number<double>(f[2], source, line, "deviation"),
                          parse_bool(f[3], source, line, "attack_flag")});
    }
    return events;
}

std::string calibration_csv(const CalibrationDataset& data) {
    std::string out(kCalibrationHeader);
    out += '\n';
    for (const auto& s : data.samples()) {
        out += format_double(s.x) + ',' + format_double(s.y) + '\n';
    }
    return out;
}

CalibrationDataset parse_calibration_csv(std::string_view text, std::string_view source) {
    std::vector<CalibrationSample> samples;
    for (const auto& [line, f] : rows_of(text, source, kCalibrationHeader)) {
        samples.push_back(
            {parse_number<double>(f[0], source, line, "deviation"), parse_number<double>(f[1], source, line, "strength")});
    }
    if (samples.size() < 2) {
        fail(source, 1, "calibration data needs at least two rows, got " + std::to_string(samples.size()));
    }
    return CalibrationDataset(std::move(samples));
}

CalibrationDataset read_calibration(const fs::path& path) {
    return parse_calibration_csv(read_file(path), path.string());
}

json baseline_to_json(const Baseline& b, WindowLength window_length) {
    return json{{"h_n", b.h_n},
                {"threshold", b.threshold},
                {"training_windows", b.training_windows},
                {"window_length_ms", window_length.count()}};
}

Baseline baseline_from_json(const json& j) {
    Baseline b;
    b.h_n = require<double>(j, "h_n");
    b.threshold = require<double>(j, "threshold");
    b.training_windows = require<std::size_t>(j, "training_windows");
    if (!(b.h_n >= 0.0) || !(b.threshold >= 0.0) || b.training_windows == 0) {
        throw InputError("baseline needs h_n >= 0, threshold >= 0 and at least one training window");
    }
    return b;
}

json model_to_json(const FittedModel& model, std::string_view created_at) {
    json j{
        {"kind", to_string(model.kind.family)},
        {"degree", model.kind.family == ModelFamily::polynomial ? json(*model.kind.degree) : json(nullptr)},
        {"coefficients", model.coefficients},
        {"fit_method", to_string(model.fit_method)},
        {"trained_on", model.trained_on},
        {"sample_count", model.sample_count},
        {"condition_number", optional_json(model.condition_number)},
    };
    if (!created_at.empty()) {
        j["created_at"] = created_at;
    }
    return j;
}

FittedModel model_from_json(const json& j) {
    FittedModel m;
    const auto kind = require<std::string>(j, "kind");
    const auto family = parse_family(kind);
    if (!family) {
        throw InputError("unknown model kind '" + kind + "'");
    }
    m.kind = ModelKind::of(*family);
    if (*family == ModelFamily::polynomial) {
        const int degree = require<int>(j, "degree");
        if (degree < 1 || degree > kMaxPolynomialDegree) {
            throw InputError("polynomial degree out of range: " + std::to_string(degree));
        }
        m.kind.degree = degree;
    }
    m.coefficients = require<std::vector<double>>(j, "coefficients");
    if (m.coefficients.size() != m.kind.coefficient_count()) {
        throw InputError(m.kind.label() + " model needs " + std::to_string(m.kind.coefficient_count()) +
                         " coefficients, file has " + std::to_string(m.coefficients.size()));
    }
    const auto method = require<std::string>(j, "fit_method");
    const auto parsed = parse_fit_method(method);
    if (!parsed) {
        throw InputError("unknown fit_method '" + method + "'");
    }
    m.fit_method = *parsed;
    m.trained_on = require<std::string>(j, "trained_on");
    if (j.contains("sample_count")) {
        m.sample_count = j.at("sample_count").get<std::size_t>();
    }
    if (j.contains("condition_number") && !j.at("condition_number").is_null()) {
        m.condition_number = j.at("condition_number").get<double>();
    }
    return m;
}

void save_model(const fs::path& path, const FittedModel& model) {
    write_atomic(path, model_to_json(model, utc_timestamp()).dump(2) + "\n");
}

FittedModel load_model(const fs::path& path) {
    try {
        return model_from_json(parse_json(read_file(path), path.string()));
    } catch (const InputError& e) {
        const std::string what = e.what();
        if (what.rfind(path.string(), 0) == 0) {
            throw;
        }
        throw InputError(path.string() + ": " + what);
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

std::string fit_report_row(std::string_view model, const FitReport& r) {
    std::string row(model);
    for (const auto& field : {optional_fixed2(r.r_squared), optional_fixed2(r.cc), format_fixed2(r.sse),
                              format_fixed2(r.mse), format_fixed2(r.rmse), format_fixed2(r.nmse_eq11),
                              format_fixed2(r.nmse_table2), format_fixed2(r.eta), format_fixed2(r.mae_index)}) {
        row += ',';
        row += field;
    }
    return row;
}

std::string fit_reports_csv(const ModelComparisonReport& report) {
    std::string out(kReportHeader);
    out += '\n';
    for (const auto& o : report.outcomes) {
        if (o.report) {
            out += fit_report_row(to_string(o.kind.family), *o.report) + '\n';
        }
    }
    return out;
}

json fit_report_to_json(const FitReport& r) {
    return json{{"r2", optional_json(r.r_squared)},
                {"cc", optional_json(r.cc)},
                {"sse", r.sse},
                {"mse", r.mse},
                {"rmse", r.rmse},
                {"nmse_eq11", r.nmse_eq11},
                {"nmse_table2", r.nmse_table2},
                {"eta", r.eta},
                {"mae_index", r.mae_index},
                {"mean_abs_error_mbps", r.mean_abs_error},
                {"sample_count", r.sample_count}};
}

json comparison_to_json(const ModelComparisonReport& report) {
    json models = json::array();
    for (const auto& o : report.outcomes) {
        json m{{"model", to_string(o.kind.family)}};
        if (o.kind.degree) {
            m["degree"] = *o.kind.degree;
        }
        if (o.report) {
            m.update(fit_report_to_json(*o.report));
            m["coefficients"] = o.model->coefficients;
            m["fit_method"] = to_string(o.model->fit_method);
        } else {
            m["skipped"] = o.skip_reason.value_or("");
        }
        models.push_back(std::move(m));
    }
    json best{{"model", to_string(report.best_model.family)}};
    if (report.best_model.degree) {
        best["degree"] = *report.best_model.degree;
    }
    return json{{"criterion", to_string(report.criterion)}, {"best_model", std::move(best)}, {"models", std::move(models)}};
}

std::vector<FitReportRow> parse_fit_reports_csv(std::string_view text, std::string_view source) {
    std::vector<FitReportRow> rows;
    for (const auto& [line, f] : rows_of(text, source, kReportHeader)) {
        FitReportRow row;
        row.model = std::string(f[0]);
        auto& r = row.report;
        if (!f[1].empty()) {
            r.r_squared = parse_number<double>(f[1], source, line, "r2");
        }
        if (!f[2].empty()) {
            r.cc = parse_number<double>(f[2], source, line, "cc");
        }
        r.sse = parse_number<double>(f[3], source, line, "sse");
        r.mse = parse_number<double>(f[4], source, line, "mse");
        r.rmse = parse_number<double>(f[5], source, line, "rmse");
        r.nmse_eq11 = parse_number<double>(f[6], source, line, "nmse_eq11");
        r.nmse_table2 = parse_number<double>(f[7], source, line, "nmse_table2");
        r.eta = parse_number<double>(f[8], source, line, "eta");
        r.mae_index = parse_number<double>(f[9], source, line, "mae_index");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string predictions_csv(const ModelComparisonReport& report, const CalibrationDataset& data) {
    std::string out(kPredictionHeader);
    out += '\n';
    const auto& samples = data.samples();
    for (const auto& o : report.outcomes) {
        if (!o.report) {
            continue;
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            out += std::string(to_string(o.kind.family)) + ',' + format_double(samples[i].x) + ',' +
                   format_double(samples[i].y) + ',' + format_double(o.predicted[i]) + ',' +
                   format_double(o.predicted[i] - samples[i].y) + '\n';
        }
    }
    return out;
}

std::string estimates_csv(std::span<const StrengthEstimate> estimates) {
    std::string out(kEstimateHeader);
    out += '\n';
    for (const auto& e : estimates) {
        out += std::to_string(e.window_index) + ',' + format_double(e.deviation) + ',' +
               format_double(e.estimated_strength_mbps) + ',' + std::string(bool_text(e.clamped)) + '\n';
    }
    return out;
}

std::vector<StrengthEstimate> parse_estimates_csv(std::string_view text, std::string_view source) {
    std::vector<StrengthEstimate> out;
    for (const auto& [line, f] : rows_of(text, source, kEstimateHeader)) {
        StrengthEstimate e;
        e.window_index = parse_number<std::uint64_t>(f[0], source, line, "window_index");
        e.deviation = parse_number<double>(f[1], source, line, "deviation");
        e.estimated_strength_mbps = parse_number<double>(f[2], source, line, "estimate_mbps");
        e.clamped = parse_bool(f[3], source, line, "clamped");
        out.push_back(e);
    }
    return out;
}

}  // namespace ddos::io

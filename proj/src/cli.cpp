#include "ddos/cli.hpp"

#include "CLI11.hpp"
#include "ddos/errors.hpp"
#include "ddos/fixtures.hpp"
#include "ddos/io.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>

namespace ddos::cli {

namespace {

namespace fs = std::filesystem;

enum class Command { simulate, baseline, calibrate, fit, evaluate, compare, estimate, reproduce_table2 };

struct RunConfig {
    Command command = Command::reproduce_table2;

    // scenario
    ScenarioConfig scenario;
    std::optional<double> strength_mbps;
    bool no_spoof = false;
    std::int64_t window_ms = kDefaultWindowLength.count();

    // detection
    double threshold = kDefaultThreshold;

    // model
    std::string model_name = "polynomial";
    int degree = kDefaultPolynomialDegree;
    std::string criterion = "eta";

    // paths
    std::string out;
    std::string json_out;
    std::string flows;
    std::string baseline;
    std::string baseline_out;
    std::string data;
    std::string model;
    std::string events;
    std::string events_out;
    std::string predictions_out;
    std::vector<std::string> runs;  // STRENGTH=PATH
    bool sweep = false;
    std::vector<double> strengths;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') {
            return v;
        }
        throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer: '" + env + "'");
    }
    return 42;
}

void add_scenario_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--clients", cfg.scenario.legit_clients, "Legitimate clients")->capture_default_str();
    cmd->add_option("--zombies", cfg.scenario.zombies, "Attacking zombies")->capture_default_str();
    cmd->add_option("--legit-rate", cfg.scenario.legit_mean_rate_mbps_per_client, "Mean Mbps per client")
        ->capture_default_str();
    cmd->add_option("--windows", cfg.scenario.num_windows, "Windows per run")->capture_default_str();
    cmd->add_option("--window-ms", cfg.window_ms, "Window length in ms")->capture_default_str();
    cmd->add_option("--seed", cfg.scenario.seed, "RNG seed (default from " + std::string(kSeedEnvVar) + " or 42)");
    cmd->add_option("--packet-bytes", cfg.scenario.packet_bytes, "Packet size in bytes")->capture_default_str();
    cmd->add_flag("--no-spoof", cfg.no_spoof, "One flow per zombie instead of forged per-packet sources");
}

ScenarioConfig scenario_of(const RunConfig& cfg) {
    ScenarioConfig s = cfg.scenario;
    s.window_length = WindowLength(cfg.window_ms);
    s.spoof_sources = !cfg.no_spoof;
    return s;
}

ModelKind model_kind_of(const RunConfig& cfg) {
    const auto family = parse_family(cfg.model_name);
    if (!family) {
        throw ConfigError("unknown model '" + cfg.model_name + "'");
    }
    return ModelKind::of(*family, cfg.degree);
}

Baseline read_baseline(const std::string& path) {
    try {
        return io::baseline_from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Windows of a flow file: with a metadata sidecar the simulated window count
// is honoured, otherwise windows span the indices present.
std::vector<WindowCounts> read_windows(const std::string& path, WindowLength fallback) {
    if (fs::exists(io::metadata_path_for(path))) {
        const auto series = io::read_series(path);
        return windowize(series.records, series.metadata.config.window_length, series.metadata.config.num_windows);
    }
    return windowize(io::read_flow_records(path), fallback);
}

void print_report_table(std::ostream& out, const ModelComparisonReport& report) {
    out << io::fit_reports_csv(report);
    for (const auto& o : report.outcomes) {
        if (o.skip_reason) {
            out << "# skipped " << to_string(o.kind.family) << ": " << *o.skip_reason << '\n';
        }
    }
    out << "# best model by " << to_string(report.criterion) << ": " << report.best_model.label() << '\n';
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    auto s = scenario_of(cfg);
    if (cfg.strength_mbps) {
        if (s.zombies == 0 && *cfg.strength_mbps > 0.0) {
            throw ConfigError("--strength needs at least one zombie");
        }
        s.attack_rate_mbps_per_zombie = s.zombies == 0 ? 0.0 : *cfg.strength_mbps / s.zombies;
    }
    const auto series = simulate(s);
    io::write_series(cfg.out, series);
    out << "wrote " << series.records.size() << " flow records over " << s.num_windows << " windows to " << cfg.out
        << " (aggregate attack " << s.aggregate_attack_mbps() << " Mbps)\n";
    return kExitOk;
}

int cmd_baseline(const RunConfig& cfg, std::ostream& out) {
    const auto windows = read_windows(cfg.flows, WindowLength(cfg.window_ms));
    std::vector<EntropyValue> entropies;
    for (const auto& w : windows) {
        entropies.push_back(compute_entropy(w));
    }
    const auto baseline = build_baseline(entropies, cfg.threshold);
    const auto length = windows.empty() ? WindowLength(cfg.window_ms) : windows.front().window_length();
    io::write_atomic(cfg.out, io::baseline_to_json(baseline, length).dump(2) + "\n");
    out << "baseline h_n = " << io::format_double(baseline.h_n) << " bits over " << baseline.training_windows
        << " windows, threshold " << io::format_double(baseline.threshold) << '\n';
    return kExitOk;
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
    std::vector<LabeledRun> runs;
    std::optional<Baseline> baseline;
    if (!cfg.baseline.empty()) {
        baseline = read_baseline(cfg.baseline);
    }

    if (cfg.sweep) {
        const auto base = scenario_of(cfg);
        if (!baseline) {
            ScenarioConfig normal = base;
            normal.attack_rate_mbps_per_zombie = 0.0;
            baseline = baseline_from_series(simulate(normal), cfg.threshold);
            if (!cfg.baseline_out.empty()) {
                io::write_atomic(cfg.baseline_out, io::baseline_to_json(*baseline, base.window_length).dump(2) + "\n");
            }
        }
        const auto strengths = cfg.strengths.empty() ? default_strengths() : cfg.strengths;
        runs = sweep(base, strengths);
    } else {
        if (!baseline) {
            throw ConfigError("calibrate needs --baseline unless --sweep is given");
        }
        for (const auto& spec : cfg.runs) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("--run expects STRENGTH=PATH, got '" + spec + "'");
            }
            double strength = 0.0;
            try {
                strength = std::stod(spec.substr(0, eq));
            } catch (const std::exception&) {
                throw ConfigError("bad strength in --run '" + spec + "'");
            }
            runs.push_back({strength, io::read_series(spec.substr(eq + 1))});
        }
        if (runs.empty()) {
            throw ConfigError("calibrate needs at least one --run or --sweep");
        }
    }
    const auto data = calibrate(runs, *baseline);
    io::write_atomic(cfg.out, io::calibration_csv(data));
    out << "wrote " << data.sample_count() << " calibration samples to " << cfg.out << '\n';
    return kExitOk;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    const auto data = io::read_calibration(cfg.data);
    const auto model = fit(data, model_kind_of(cfg));
    io::save_model(cfg.out, model);
    out << model.kind.label() << " coefficients:";
    for (double c : model.coefficients) {
        out << ' ' << io::format_double(c);
    }
    out << '\n';
    return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    const auto model = io::load_model(cfg.model);
    const auto data = io::read_calibration(cfg.data);
    const auto predicted = predictions(model, data);
    const auto report = evaluate(data.ys(), predicted);
    const std::string csv =
        "model,r2,cc,sse,mse,rmse,nmse_eq11,nmse_table2,eta,mae_index\n" +
        io::fit_report_row(to_string(model.kind.family), report) + '\n';
    if (!cfg.out.empty()) {
        io::write_atomic(cfg.out, csv);
    }
    if (!cfg.json_out.empty()) {
        auto j = io::fit_report_to_json(report);
        j["model"] = to_string(model.kind.family);
        io::write_atomic(cfg.json_out, j.dump(2) + "\n");
    }
    const auto summary = residual_summary(residuals(model, data));
    out << csv << "# residuals: " << summary.positive_count << " positive (over-estimate), "
        << summary.negative_count << " negative (under-estimate), max |r| = " << io::format_double(summary.max_abs)
        << " Mbps\n";
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const auto data = cfg.data.empty() ? table1_dataset() : io::read_calibration(cfg.data);
    const auto criterion = parse_criterion(cfg.criterion);
    if (!criterion) {
        throw ConfigError("unknown criterion '" + cfg.criterion + "'");
    }
    const auto report = compare_models(data, cfg.degree, *criterion);
    if (!cfg.out.empty()) {
        io::write_atomic(cfg.out, io::fit_reports_csv(report));
    }
    if (!cfg.json_out.empty()) {
        io::write_atomic(cfg.json_out, io::comparison_to_json(report).dump(2) + "\n");
    }
    if (!cfg.predictions_out.empty()) {
        io::write_atomic(cfg.predictions_out, io::predictions_csv(report, data));
    }
    print_report_table(out, report);
    return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = io::load_model(cfg.model);
    std::vector<DetectionEvent> events;
    if (!cfg.data.empty()) {
        const auto data = io::read_calibration(cfg.data);
        std::uint64_t index = 0;
        for (const auto& s : data.samples()) {
            events.push_back({index++, NAN, s.x, true});
        }
    } else if (!cfg.events.empty()) {
        events = io::parse_detection_events_csv(io::read_file(cfg.events), cfg.events);
    } else if (!cfg.flows.empty()) {
        if (cfg.baseline.empty()) {
            throw ConfigError("estimate --flows needs --baseline");
        }
        events = detect(read_windows(cfg.flows, WindowLength(cfg.window_ms)), read_baseline(cfg.baseline));
        if (!cfg.events_out.empty()) {
            io::write_atomic(cfg.events_out, io::detection_events_csv(events));
        }
    } else {
        throw ConfigError("estimate needs one of --data, --events or --flows");
    }
    const auto result = estimate_strength(model, events);
    io::write_atomic(cfg.out, io::estimates_csv(result.estimates));
    for (const auto& f : result.failures) {
        err << "window " << f.window_index << ": " << f.reason << '\n';
    }
    out << "wrote " << result.estimates.size() << " estimates to " << cfg.out << " (" << result.failures.size()
        << " out-of-domain)\n";
    return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& out) {
    const auto repro = reproduce_table2();
    out << std::left << std::setw(12) << "model" << std::setw(10) << "metric" << std::setw(12) << "expected"
        << std::setw(14) << "actual" << std::setw(12) << "tolerance" << "result\n";
    for (const auto& c : repro.checks) {
        const std::string tol = c.relative ? io::format_fixed2(c.tolerance * 100.0) + "%" : io::format_double(c.tolerance);
        std::ostringstream actual;
        actual << std::fixed << std::setprecision(4) << c.actual;
        out << std::setw(12) << c.model << std::setw(10) << c.metric << std::setw(12) << io::format_fixed2(c.expected)
            << std::setw(14) << actual.str() << std::setw(12) << tol << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    for (const auto& [d, sse] : repro.polynomial_sse_by_degree) {
        out << "polynomial degree " << d << ": SSE " << io::format_fixed2(sse) << '\n';
    }
    out << "polynomial degree matching published SSE: "
        << (repro.polynomial_degree ? std::to_string(*repro.polynomial_degree) : std::string("none")) << '\n';
    out << "best model by eta: " << repro.report.best_model.label() << (repro.best_is_polynomial ? " PASS" : " FAIL")
        << '\n';
    if (!cfg.out.empty()) {
        io::write_atomic(cfg.out, io::fit_reports_csv(repro.report));
    }
    if (!cfg.json_out.empty()) {
        auto j = io::comparison_to_json(repro.report);
        j["polynomial_degree"] = repro.polynomial_degree ? nlohmann::json(*repro.polynomial_degree) : nlohmann::json();
        j["all_passed"] = repro.all_passed();
        io::write_atomic(cfg.json_out, j.dump(2) + "\n");
    }
    out << (repro.all_passed() ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
    return repro.all_passed() ? kExitOk : kExitDataError;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
        case Command::simulate: return cmd_simulate(cfg, out);
        case Command::baseline: return cmd_baseline(cfg, out);
        case Command::calibrate: return cmd_calibrate(cfg, out);
        case Command::fit: return cmd_fit(cfg, out);
        case Command::evaluate: return cmd_evaluate(cfg, out);
        case Command::compare: return cmd_compare(cfg, out);
        case Command::estimate: return cmd_estimate(cfg, out, err);
        case Command::reproduce_table2: return cmd_reproduce(cfg, out);
    }
    return kExitUsage;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Entropy-deviation DDoS detection and attack strength estimation"};
    app.require_subcommand(1);

    try {
        cfg.scenario.seed = default_seed();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    auto* simulate_cmd = app.add_subcommand("simulate", "Generate synthetic flow records");
    add_scenario_options(simulate_cmd, cfg);
    simulate_cmd->add_option("--out", cfg.out, "Flow-record CSV (metadata goes to <out>.meta.json)")->required();
    auto* rate = simulate_cmd->add_option("--rate-per-zombie", cfg.scenario.attack_rate_mbps_per_zombie,
                                          "Attack Mbps per zombie");
    simulate_cmd->add_option("--strength", cfg.strength_mbps, "Aggregate attack Mbps")->excludes(rate);

    auto* baseline_cmd = app.add_subcommand("baseline", "Build a normal-profile baseline from attack-free flows");
    baseline_cmd->add_option("--flows", cfg.flows, "Attack-free flow-record CSV")->required()->check(CLI::ExistingFile);
    baseline_cmd->add_option("--out", cfg.out, "Baseline JSON")->required();
    baseline_cmd->add_option("--threshold", cfg.threshold, "Detection threshold in bits")->capture_default_str();
    baseline_cmd->add_option("--window-ms", cfg.window_ms, "Window length when no metadata is present")
        ->capture_default_str();

    auto* calibrate_cmd = app.add_subcommand("calibrate", "Build a (deviation, strength) dataset from labeled runs");
    add_scenario_options(calibrate_cmd, cfg);
    calibrate_cmd->add_option("--out", cfg.out, "Calibration CSV")->required();
    calibrate_cmd->add_option("--baseline", cfg.baseline, "Baseline JSON")->check(CLI::ExistingFile);
    calibrate_cmd->add_option("--run", cfg.runs, "Labeled run STRENGTH=FLOWS.csv (repeatable)");
    calibrate_cmd->add_flag("--sweep", cfg.sweep, "Simulate a strength sweep instead of reading runs");
    calibrate_cmd->add_option("--strengths", cfg.strengths, "Sweep strengths in Mbps (default 10,15,...,100)")
        ->delimiter(',');
    calibrate_cmd->add_option("--threshold", cfg.threshold, "Detection threshold for a simulated baseline")
        ->capture_default_str();
    calibrate_cmd->add_option("--baseline-out", cfg.baseline_out, "Write the simulated baseline here");

    auto* fit_cmd = app.add_subcommand("fit", "Fit one model family to calibration data");
    fit_cmd->add_option("--data", cfg.data, "Calibration CSV")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--model", cfg.model_name, "linear|polynomial|logarithmic|power|exponential")
        ->capture_default_str();
    fit_cmd->add_option("--degree", cfg.degree, "Polynomial degree")->capture_default_str();
    fit_cmd->add_option("--out", cfg.out, "Model JSON")->required();

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a fitted model on calibration data");
    evaluate_cmd->add_option("--model", cfg.model, "Model JSON")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--data", cfg.data, "Calibration CSV")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--out", cfg.out, "Report CSV");
    evaluate_cmd->add_option("--json", cfg.json_out, "Report JSON");

    auto* compare_cmd = app.add_subcommand("compare", "Fit and compare all model families");
    compare_cmd->add_option("--data", cfg.data, "Calibration CSV (default: packaged calibration points)")
        ->check(CLI::ExistingFile);
    compare_cmd->add_option("--degree", cfg.degree, "Polynomial degree")->capture_default_str();
    compare_cmd->add_option("--criterion", cfg.criterion, "eta|r_squared|sse")->capture_default_str();
    compare_cmd->add_option("--out", cfg.out, "Report CSV");
    compare_cmd->add_option("--json", cfg.json_out, "Report JSON");
    compare_cmd->add_option("--predictions", cfg.predictions_out, "Tidy per-sample predictions CSV");

    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate attack strength for flagged windows");
    estimate_cmd->add_option("--model", cfg.model, "Model JSON")->required()->check(CLI::ExistingFile);
    estimate_cmd->add_option("--out", cfg.out, "Estimates CSV")->required();
    auto* data_opt = estimate_cmd->add_option("--data", cfg.data, "Calibration CSV; each row is a flagged window")
                         ->check(CLI::ExistingFile);
    auto* events_opt =
        estimate_cmd->add_option("--events", cfg.events, "Detection events CSV")->check(CLI::ExistingFile);
    auto* flows_opt = estimate_cmd->add_option("--flows", cfg.flows, "Flow-record CSV")->check(CLI::ExistingFile);
    data_opt->excludes(events_opt)->excludes(flows_opt);
    events_opt->excludes(flows_opt);
    estimate_cmd->add_option("--baseline", cfg.baseline, "Baseline JSON (with --flows)")->check(CLI::ExistingFile);
    estimate_cmd->add_option("--events-out", cfg.events_out, "Write detection events (with --flows)");
    estimate_cmd->add_option("--window-ms", cfg.window_ms, "Window length when no metadata is present")
        ->capture_default_str();

    auto* repro_cmd = app.add_subcommand("reproduce-table2", "Check the packaged fixture against published figures");
    repro_cmd->add_option("--out", cfg.out, "Report CSV");
    repro_cmd->add_option("--json", cfg.json_out, "Report JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::pair<CLI::App*, Command> table[] = {
        {simulate_cmd, Command::simulate}, {baseline_cmd, Command::baseline}, {calibrate_cmd, Command::calibrate},
        {fit_cmd, Command::fit},           {evaluate_cmd, Command::evaluate}, {compare_cmd, Command::compare},
        {estimate_cmd, Command::estimate}, {repro_cmd, Command::reproduce_table2},
    };
    for (const auto& [cmd, command] : table) {
        if (cmd->parsed()) {
            cfg.command = command;
        }
    }

    try {
        return dispatch(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
}

}  // namespace ddos::cli

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "ddos/fixtures.hpp"
#include "ddos/io.hpp"
#include "ddos/metrics.hpp"
#include "ddos/pipeline.hpp"
#include "ddos/regression.hpp"
#include "ddos/traffic_sim.hpp"
#include "oracles.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace ddos;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail << "first failure: " << what << "; ";
        }
        pass = pass && ok;
    }
};

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome table_reproduction() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto repro = reproduce_table2();
    const double elapsed = seconds_since(t0);
    for (const auto& c : repro.checks) {
        o.require(c.pass, c.model + " " + c.metric + " = " + io::format_double(c.actual));
    }
    o.require(repro.polynomial_degree.has_value(), "no polynomial degree matched");
    o.require(repro.best_is_polynomial, "best model is " + repro.report.best_model.label());
    o.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
    o.detail << repro.checks.size() << " checks, polynomial degree "
             << (repro.polynomial_degree ? std::to_string(*repro.polynomial_degree) : "none") << ", best "
             << repro.report.best_model.label() << ", " << elapsed << " s";
    return o;
}

Outcome metric_identities() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> len(2, 60);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 100.0);
    constexpr double tol = 1e-9;
    int checked = 0;
    for (int pair = 0; pair < 500; ++pair) {
        const int n = len(rng);
        const double s = scale(rng);
        const double offset = 50.0 * z(rng);
        std::vector<double> obs(n), comp(n);
        for (int i = 0; i < n; ++i) {
            obs[i] = offset + s * z(rng);
            comp[i] = obs[i] + s * 0.5 * z(rng);
        }
        const auto r = evaluate(obs, comp);
        const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / n;
        double sst = 0.0;
        for (double v : obs) {
            sst += (v - mean) * (v - mean);
        }
        const double var = sst / n;
        const auto tag = "pair " + std::to_string(pair);
        o.require(rel_close(r.mse, r.sse / n, tol), tag + " MSE");
        o.require(rel_close(r.rmse, std::sqrt(r.mse), tol), tag + " RMSE");
        o.require(r.r_squared && r.cc && rel_close(*r.r_squared, *r.cc * *r.cc, tol), tag + " R2");
        o.require(rel_close(r.eta, 1.0 - r.sse / sst, tol), tag + " eta");
        o.require(rel_close(r.nmse_eq11 * var, r.mse, tol), tag + " NMSE");
        ++checked;
    }
    o.detail << checked << " random pairs, relative tolerance " << tol;
    return o;
}

Outcome entropy_properties() {
    Outcome o;
    const auto window = [](const std::vector<std::uint64_t>& counts, std::size_t shift = 0) {
        std::map<std::string, std::uint64_t> m;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            m["f" + std::to_string((i + shift) % counts.size() + 1000)] = counts[i];
        }
        return WindowCounts(0, kDefaultWindowLength, std::move(m));
    };
    constexpr double tol = 1e-12;

    for (std::uint64_t n : {1u, 2u, 3u, 7u, 64u, 1000u}) {
        const std::vector<std::uint64_t> uniform(n, 37);
        o.require(std::abs(compute_entropy(window(uniform)).value - std::log2(static_cast<double>(n))) <= tol,
                  "uniform N=" + std::to_string(n));
    }
    o.require(compute_entropy(window({123456})).value == 0.0, "singleton");

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> len(1, 200);
    std::uniform_int_distribution<std::uint64_t> bytes(1, 100000);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::uint64_t> counts(len(rng));
        for (auto& c : counts) {
            c = bytes(rng);
        }
        const double h = compute_entropy(window(counts)).value;
        const double expected = oracle::entropy_bits(counts);
        worst = std::max(worst, std::abs(h - expected));
        const auto tag = "vector " + std::to_string(trial);
        o.require(std::abs(h - expected) <= tol * std::max(1.0, expected), tag + " oracle");
        o.require(h >= 0.0 && h <= std::log2(static_cast<double>(counts.size())), tag + " range");

        auto permuted = counts;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        o.require(std::abs(compute_entropy(window(permuted, 17)).value - h) <= tol, tag + " permutation");

        auto scaled = counts;
        for (auto& c : scaled) {
            c *= 13;
        }
        o.require(std::abs(compute_entropy(window(scaled)).value - h) <= tol, tag + " scaling");
    }
    o.detail << "1000 random vectors, worst oracle gap " << worst << " bits";
    return o;
}

double fitted_space_sse(const FittedModel& m, const CalibrationDataset& data) {
    double sse = 0.0;
    for (const auto& s : data.samples()) {
        const double p = predict(m, s.x);
        const double e = m.fit_method == FitMethod::log_linearized ? std::log(p) - std::log(s.y) : p - s.y;
        sse += e * e;
    }
    return sse;
}

Outcome fit_optimality() {
    Outcome o;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> len(3, 12);
    std::uniform_real_distribution<double> x(0.05, 0.5);
    std::uniform_real_distribution<double> noise(-8.0, 8.0);
    int probes = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = len(rng);
        std::vector<CalibrationSample> s;
        for (int i = 0; i < n; ++i) {
            const double xi = x(rng);
            s.push_back({xi, 5.0 + 250.0 * xi + noise(rng)});
        }
        const CalibrationDataset data(s);
        const auto tag = "dataset " + std::to_string(trial);

        const auto lin = fit(data, ModelKind::of(ModelFamily::linear));
        const auto xs = data.xs();
        const auto ys = data.ys();
        const double grid = oracle::grid_search_line_sse(xs, ys);
        o.require(fitted_space_sse(lin, data) <= grid + 1e-6, tag + " linear vs grid");

        // y stays above 4.5, so every family is in domain.
        for (auto family : kAllFamilies) {
            const auto m = fit(data, ModelKind::of(family, 2));
            const double base = fitted_space_sse(m, data);
            for (std::size_t k = 0; k < m.coefficients.size(); ++k) {
                for (double sign : {-1.0, 1.0}) {
                    auto probe = m;
                    probe.coefficients[k] += sign * 1e-4 * std::max(1.0, std::abs(m.coefficients[k]));
                    o.require(fitted_space_sse(probe, data) >= base,
                              tag + " " + m.kind.label() + " coefficient " + std::to_string(k));
                    ++probes;
                }
            }
        }
    }
    o.detail << "100 datasets, " << probes << " perturbation probes";
    return o;
}

Outcome end_to_end() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg;
    cfg.legit_clients = 400;
    cfg.zombies = 100;
    cfg.num_windows = 50;
    cfg.seed = 42;

    ScenarioConfig normal = cfg;
    normal.attack_rate_mbps_per_zombie = 0.0;
    const auto baseline = baseline_from_series(simulate(normal));
    const auto strengths = default_strengths();
    const auto runs = sweep(cfg, strengths);
    const auto data = calibrate(runs, baseline);

    const double rho = oracle::spearman(data.ys(), data.xs());
    o.require(rho >= 0.9, "Spearman " + std::to_string(rho));

    std::vector<CalibrationSample> train, test;
    for (std::size_t i = 0; i < data.samples().size(); ++i) {
        (i % 2 == 1 ? train : test).push_back(data.samples()[i]);
    }
    const auto model = fit(CalibrationDataset(train), ModelKind::of(ModelFamily::polynomial, 2));
    double mae = 0.0;
    for (const auto& s : test) {
        mae += std::abs(predict(model, s.x) - s.y);
    }
    mae /= static_cast<double>(test.size());
    o.require(mae <= 10.0, "held-out MAE " + std::to_string(mae));

    const double elapsed = seconds_since(t0);
    o.require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
    o.detail << "baseline H_n " << baseline.h_n << ", Spearman " << rho << ", held-out MAE " << mae << " Mbps, "
             << elapsed << " s";
    return o;
}

Outcome residual_convention() {
    Outcome o;
    const auto data = table1_dataset();
    const auto lin = fit(data, ModelKind::of(ModelFamily::linear));
    const auto r = residuals(lin, data);
    const auto f = r.flipped();
    o.require(r.positive_count() + r.negative_count() + r.zero_count() == 19, "counts do not sum to 19");
    o.require(f.positive_count() == r.negative_count() && f.negative_count() == r.positive_count(),
              "flipped counts");
    o.require(f.zero_count() == r.zero_count(), "flipped zero count");
    o.detail << r.positive_count() << " positive, " << r.negative_count() << " negative, " << r.zero_count()
             << " zero";
    return o;
}

Outcome persistence() {
    Outcome o;
    const auto dir = fs::temp_directory_path() / ("ddos_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    const auto data = table1_dataset();
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) {
        grid.push_back(0.05 + 0.002 * i);
    }
    int models = 0;
    std::vector<ModelKind> kinds;
    for (auto family : kAllFamilies) {
        kinds.push_back(ModelKind::of(family));
    }
    for (int d = 1; d <= kMaxPolynomialDegree; ++d) {
        kinds.push_back(ModelKind::of(ModelFamily::polynomial, d));
    }
    for (const auto& kind : kinds) {
        const auto model = fit(data, kind);
        const auto path = dir / "model.json";
        io::save_model(path, model);
        const auto back = io::load_model(path);
        for (double x : grid) {
            o.require(std::bit_cast<std::uint64_t>(predict(back, x)) == std::bit_cast<std::uint64_t>(predict(model, x)),
                      kind.label() + " at x=" + io::format_double(x));
        }
        ++models;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    o.detail << models << " models, " << grid.size() << " inputs each, bit-exact";
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"published fit table reproduction", table_reproduction},
        {"metric identities", metric_identities},
        {"entropy properties", entropy_properties},
        {"fit optimality", fit_optimality},
        {"end-to-end simulation", end_to_end},
        {"residual convention", residual_convention},
        {"persistence round-trip", persistence},
    };
    int failed = 0;
    int id = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id++ << " (" << name << "): " << o.detail.str()
                  << '\n';
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}

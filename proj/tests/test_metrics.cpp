#include "ddos/errors.hpp"
#include "ddos/fixtures.hpp"
#include "ddos/metrics.hpp"
#include "ddos/regression.hpp"
#include "doctest.h"

#include <cmath>
#include <random>

using namespace ddos;

TEST_CASE("perfect fit") {
    const std::vector<double> y{10, 20, 35, 50};
    const auto r = evaluate(y, y);
    CHECK(*r.r_squared == doctest::Approx(1.0));
    CHECK(*r.cc == doctest::Approx(1.0));
    CHECK(r.sse == 0.0);
    CHECK(r.mse == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.nmse_eq11 == 0.0);
    CHECK(r.nmse_table2 == 0.0);
    CHECK(r.eta == 1.0);
    CHECK(r.mae_index == 1.0);
    CHECK(r.sample_count == 4);
}

TEST_CASE("hand-computed three point example") {
    // observed 1,2,3 vs computed 1,2,4
    const std::vector<double> o{1, 2, 3};
    const std::vector<double> c{1, 2, 4};
    const auto r = evaluate(o, c);
    CHECK(r.sse == doctest::Approx(1.0));
    CHECK(r.mse == doctest::Approx(1.0 / 3.0));
    CHECK(r.rmse == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(r.nmse_eq11 == doctest::Approx(0.5));         // (1/3) / (2/3)
    CHECK(r.nmse_table2 == doctest::Approx(1.0 / 3.0));  // (1/3) / 1
    CHECK(r.eta == doctest::Approx(0.5));
    CHECK(r.mae_index == doctest::Approx(0.5));
    CHECK(*r.r_squared == doctest::Approx(81.0 / 84.0));
    CHECK(*r.cc == doctest::Approx(3.0 / std::sqrt(84.0 / 9.0)));
    CHECK(r.mean_abs_error == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("constant prediction at the observed mean") {
    const std::vector<double> o{10, 20, 30, 40};
    const std::vector<double> c(4, 25.0);
    const auto r = evaluate(o, c);
    CHECK(r.eta == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.mae_index == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(r.cc.has_value());
    CHECK_FALSE(r.r_squared.has_value());
    CHECK(r.sse == doctest::Approx(500.0));
}

TEST_CASE("evaluate errors") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{1, 2};
    CHECK_THROWS_AS(evaluate(a, b), InputError);
    const std::vector<double> one{1};
    CHECK_THROWS_AS(evaluate(one, one), InputError);
    const std::vector<double> flat{5, 5, 5};
    CHECK_THROWS_AS(evaluate(flat, a), DegenerateError);
}

TEST_CASE("linear fit on the published data lands near the published row") {
    const auto data = table1_dataset();
    const auto model = fit(data, ModelKind::of(ModelFamily::linear));
    const auto r = evaluate(data.ys(), predictions(model, data));
    CHECK(std::abs(r.sse - 708.13) <= 0.05 * 708.13);
    CHECK(std::abs(r.mse - 37.27) <= 0.05 * 37.27);
    CHECK(std::abs(r.rmse - 6.10) <= 0.05 * 6.10);
    CHECK(std::abs(r.eta - 0.95) <= 0.01);
    CHECK(std::abs(*r.cc - 0.97) <= 0.01);
    CHECK(std::abs(r.mae_index - 0.78) <= 0.01);
    CHECK(std::abs(r.nmse_table2 - 1.32) <= 0.05);
}

TEST_CASE("residual series counts and summary") {
    const ResidualSeries r({1.0, -1.0, 0.0});
    CHECK(r.positive_count() == 1);
    CHECK(r.negative_count() == 1);
    CHECK(r.zero_count() == 1);
    const auto s = residual_summary(r);
    CHECK(s.positive_count == 1);
    CHECK(s.negative_count == 1);
    CHECK(s.max_abs == 1.0);

    const auto z = residual_summary(ResidualSeries({0.0, 0.0}));
    CHECK(z.positive_count == 0);
    CHECK(z.negative_count == 0);
    CHECK(z.max_abs == 0.0);

    CHECK_THROWS_AS(residual_summary(ResidualSeries{}), InputError);

    const auto f = ResidualSeries({2.0, 3.0, -1.0}).flipped();
    CHECK(f.positive_count() == 1);
    CHECK(f.negative_count() == 2);
}

TEST_CASE("translation leaves error and correlation measures unchanged") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> o(12), c(12);
        for (std::size_t i = 0; i < o.size(); ++i) {
            o[i] = 10.0 * static_cast<double>(i) + noise(rng);
            c[i] = o[i] + noise(rng);
        }
        const double shift = 1000.0 * noise(rng);
        auto o2 = o, c2 = c;
        for (auto& v : o2) v += shift;
        for (auto& v : c2) v += shift;
        const auto a = evaluate(o, c);
        const auto b = evaluate(o2, c2);
        CHECK(b.sse == doctest::Approx(a.sse).epsilon(1e-6));
        CHECK(b.mse == doctest::Approx(a.mse).epsilon(1e-6));
        CHECK(b.rmse == doctest::Approx(a.rmse).epsilon(1e-6));
        CHECK(*b.cc == doctest::Approx(*a.cc).epsilon(1e-6));
    }
}

#include "ddos/regression.hpp"

#include "ddos/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>

namespace ddos {

namespace {

struct Line {
    double intercept;
    double slope;
};

std::string describe(const CalibrationSample& s, std::size_t index, std::size_t count) {
    std::ostringstream os;
    os << "sample " << index + 1 << " of " << count << " (x=" << s.x << ", y=" << s.y << ")";
    return os.str();
}

// Closed-form OLS: slope = Sxy / Sxx, intercept = mean(y) - slope * mean(x).
Line ordinary_least_squares(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (ys[i] - mean_y);
    }
    if (std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end() || sxx == 0.0) {
        throw DegenerateError("rank-deficient design: all x values are equal");
    }
    const double slope = sxy / sxx;
    return {mean_y - slope * mean_x, slope};
}

// Least squares for a dense n x m design (row-major) by Householder QR.
// Returns the coefficients and the triangular factor R.
struct QrSolution {
    std::vector<double> coefficients;
    Eigen::MatrixXd r;
};

QrSolution householder_least_squares(std::vector<double> design, std::vector<double> rhs, std::size_t rows,
                                     std::size_t cols) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return design[i * cols + j]; };

    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i) {
            norm = std::hypot(norm, at(i, k));
        }
        if (norm == 0.0) {
            continue;
        }
        const double alpha = at(k, k) > 0.0 ? -norm : norm;
        std::vector<double> v(rows - k);
        for (std::size_t i = k; i < rows; ++i) {
            v[i - k] = at(i, k);
        }
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double e : v) {
            vnorm2 += e * e;
        }
        if (vnorm2 == 0.0) {
            continue;
        }
        for (std::size_t j = k; j < cols; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) {
                dot += v[i - k] * at(i, j);
            }
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < rows; ++i) {
                at(i, j) -= f * v[i - k];
            }
        }
        double dot = 0.0;
        for (std::size_t i = k; i < rows; ++i) {
            dot += v[i - k] * rhs[i];
        }
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < rows; ++i) {
            rhs[i] -= f * v[i - k];
        }
    }

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols));
    double max_diag = 0.0;
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = i; j < cols; ++j) {
            r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = at(i, j);
        }
        max_diag = std::max(max_diag, std::abs(at(i, i)));
    }
    const double tol = max_diag * static_cast<double>(rows) * std::numeric_limits<double>::epsilon();
    std::vector<double> c(cols, 0.0);
    for (std::size_t i = cols; i-- > 0;) {
        if (std::abs(at(i, i)) <= tol) {
            throw DegenerateError("rank-deficient polynomial design");
        }
        double s = rhs[i];
        for (std::size_t j = i + 1; j < cols; ++j) {
            s -= at(i, j) * c[j];
        }
        c[i] = s / at(i, i);
    }
    return {std::move(c), std::move(r)};
}

FittedModel fit_polynomial(const CalibrationDataset& data, const ModelKind& kind) {
    const int degree = kind.degree.value_or(kDefaultPolynomialDegree);
    if (degree < 1 || degree > kMaxPolynomialDegree) {
        throw ConfigError("polynomial degree must be in [1, " + std::to_string(kMaxPolynomialDegree) + "], got " +
                          std::to_string(degree));
    }
    const auto xs = data.xs();
    const auto ys = data.ys();
    const std::set<double> distinct(xs.begin(), xs.end());
    if (distinct.size() < static_cast<std::size_t>(degree) + 1) {
        throw DegenerateError("polynomial of degree " + std::to_string(degree) + " needs at least " +
                              std::to_string(degree + 1) + " distinct x values, got " +
                              std::to_string(distinct.size()));
    }

    // Work in t = (x - center) / scale, t in [-1, 1].
    const auto n = xs.size();
    double center = 0.0;
    for (double x : xs) {
        center += x;
    }
    center /= static_cast<double>(n);
    double scale = 0.0;
    for (double x : xs) {
        scale = std::max(scale, std::abs(x - center));
    }

    const std::size_t cols = static_cast<std::size_t>(degree) + 1;
    std::vector<double> design(n * cols);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (xs[i] - center) / scale;
        double p = 1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            design[i * cols + j] = p;
            p *= t;
        }
    }
    auto [c, r] = householder_least_squares(std::move(design), ys, n, cols);

    // p(x) = sum_k c_k ((x - center) / scale)^k, expanded into raw monomials.
    std::vector<double> beta(cols, 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        const double ck = c[k] / std::pow(scale, static_cast<double>(k));
        double binom = 1.0;  // C(k, j)
        for (std::size_t j = 0; j <= k; ++j) {
            beta[j] += ck * binom * std::pow(-center, static_cast<double>(k - j));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    const auto& sv = svd.singularValues();
    FittedModel model;
    model.kind = ModelKind::of(ModelFamily::polynomial, degree);
    model.coefficients = std::move(beta);
    model.fit_method = FitMethod::raw_ols;
    model.condition_number = sv(0) / sv(sv.size() - 1);
    return model;
}

void require_positive_x(const CalibrationDataset& data, ModelFamily family) {
    const auto& s = data.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i].x > 0.0)) {
            throw DomainError(std::string(to_string(family)) + " model requires x > 0: " +
                              describe(s[i], i, s.size()));
        }
    }
}

void require_positive_y(const CalibrationDataset& data, ModelFamily family) {
    const auto& s = data.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i].y > 0.0)) {
            throw DomainError(std::string(to_string(family)) + " model requires y > 0: " +
                              describe(s[i], i, s.size()));
        }
    }
}

std::vector<double> logs(std::vector<double> v) {
    for (double& e : v) {
        e = std::log(e);
    }
    return v;
}

double positive_scale(double log_intercept) {
    const double b0 = std::exp(log_intercept);
    if (!(b0 > 0.0) || !std::isfinite(b0)) {
        throw DegenerateError("back-transformed scale coefficient is not a positive finite number");
    }
    return b0;
}

void check_coefficients(const FittedModel& model) {
    if (model.coefficients.size() != model.kind.coefficient_count()) {
        throw InputError(model.kind.label() + " model needs " + std::to_string(model.kind.coefficient_count()) +
                         " coefficients, has " + std::to_string(model.coefficients.size()));
    }
}

}  // namespace

CalibrationDataset::CalibrationDataset(std::vector<CalibrationSample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) {
        throw InputError("calibration dataset needs at least two samples, got " + std::to_string(samples_.size()));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i].x) || !std::isfinite(samples_[i].y)) {
            throw InputError("non-finite " + describe(samples_[i], i, samples_.size()));
        }
    }
}

std::vector<double> CalibrationDataset::xs() const {
    std::vector<double> v;
    v.reserve(samples_.size());
    for (const auto& s : samples_) {
        v.push_back(s.x);
    }
    return v;
}

std::vector<double> CalibrationDataset::ys() const {
    std::vector<double> v;
    v.reserve(samples_.size());
    for (const auto& s : samples_) {
        v.push_back(s.y);
    }
    return v;
}

std::string CalibrationDataset::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double value) {
        auto bits = std::bit_cast<std::uint64_t>(value);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& s : samples_) {
        mix(s.x);
        mix(s.y);
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string_view to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::linear: return "linear";
        case ModelFamily::polynomial: return "polynomial";
        case ModelFamily::logarithmic: return "logarithmic";
        case ModelFamily::power: return "power";
        case ModelFamily::exponential: return "exponential";
    }
    return "unknown";
}

std::optional<ModelFamily> parse_family(std::string_view name) {
    for (auto f : kAllFamilies) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

ModelKind ModelKind::of(ModelFamily family, int polynomial_degree) {
    if (family == ModelFamily::polynomial) {
        return {family, polynomial_degree};
    }
    return {family, std::nullopt};
}

std::size_t ModelKind::coefficient_count() const {
    if (family == ModelFamily::polynomial) {
        return static_cast<std::size_t>(degree.value_or(kDefaultPolynomialDegree)) + 1;
    }
    return 2;
}

std::string ModelKind::label() const {
    std::string s(to_string(family));
    if (family == ModelFamily::polynomial) {
        s += "(" + std::to_string(degree.value_or(kDefaultPolynomialDegree)) + ")";
    }
    return s;
}

std::string_view to_string(FitMethod method) {
    return method == FitMethod::raw_ols ? "raw_ols" : "log_linearized";
}

std::optional<FitMethod> parse_fit_method(std::string_view name) {
    if (name == "raw_ols") {
        return FitMethod::raw_ols;
    }
    if (name == "log_linearized") {
        return FitMethod::log_linearized;
    }
    return std::nullopt;
}

FittedModel fit(const CalibrationDataset& data, const ModelKind& kind) {
    FittedModel model;
    model.kind = ModelKind::of(kind.family, kind.degree.value_or(kDefaultPolynomialDegree));

    switch (kind.family) {
        case ModelFamily::linear: {
            const auto line = ordinary_least_squares(data.xs(), data.ys());
            model.coefficients = {line.intercept, line.slope};
            model.fit_method = FitMethod::raw_ols;
            break;
        }
        case ModelFamily::polynomial:
            model = fit_polynomial(data, model.kind);
            break;
        case ModelFamily::logarithmic: {
            require_positive_x(data, kind.family);
            const auto line = ordinary_least_squares(logs(data.xs()), data.ys());
            model.coefficients = {line.slope, line.intercept};
            model.fit_method = FitMethod::raw_ols;
            break;
        }
        case ModelFamily::power: {
            require_positive_x(data, kind.family);
            require_positive_y(data, kind.family);
            const auto line = ordinary_least_squares(logs(data.xs()), logs(data.ys()));
            model.coefficients = {positive_scale(line.intercept), line.slope};
            model.fit_method = FitMethod::log_linearized;
            break;
        }
        case ModelFamily::exponential: {
            require_positive_y(data, kind.family);
            const auto line = ordinary_least_squares(data.xs(), logs(data.ys()));
            model.coefficients = {positive_scale(line.intercept), line.slope};
            model.fit_method = FitMethod::log_linearized;
            break;
        }
    }
    model.trained_on = data.digest();
    model.sample_count = data.sample_count();
    return model;
}

double predict(const FittedModel& model, double x) {
    check_coefficients(model);
    if (!std::isfinite(x)) {
        throw DomainError("cannot predict at non-finite x");
    }
    const auto& b = model.coefficients;
    switch (model.kind.family) {
        case ModelFamily::linear:
            return b[0] + b[1] * x;
        case ModelFamily::polynomial: {
            double y = 0.0;
            for (std::size_t i = b.size(); i-- > 0;) {
                y = y * x + b[i];
            }
            return y;
        }
        case ModelFamily::logarithmic:
            if (!(x > 0.0)) {
                throw DomainError("logarithmic model is undefined at x = " + std::to_string(x));
            }
            return b[0] * std::log(x) + b[1];
        case ModelFamily::power:
            if (!(x > 0.0)) {
                throw DomainError("power model does not allow x = " + std::to_string(x) + " (x must be > 0)");
            }
            return b[0] * std::pow(x, b[1]);
        case ModelFamily::exponential:
            return b[0] * std::exp(b[1] * x);
    }
    return 0.0;
}

std::vector<double> predictions(const FittedModel& model, const CalibrationDataset& data) {
    std::vector<double> out;
    out.reserve(data.sample_count());
    for (const auto& s : data.samples()) {
        out.push_back(predict(model, s.x));
    }
    return out;
}

ResidualSeries residuals(const FittedModel& model, const CalibrationDataset& data) {
    auto r = predictions(model, data);
    const auto& s = data.samples();
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= s[i].y;
    }
    return ResidualSeries(std::move(r));
}

}  // namespace ddos

#ifndef DDOS_REGRESSION_HPP
#define DDOS_REGRESSION_HPP

#include "ddos/metrics.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddos {

// (entropy deviation in bits, attack strength in Mbps)
struct CalibrationSample {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const CalibrationSample&, const CalibrationSample&) = default;
};

// At least two finite samples.
class CalibrationDataset {
public:
    explicit CalibrationDataset(std::vector<CalibrationSample> samples);

    const std::vector<CalibrationSample>& samples() const { return samples_; }
    std::size_t sample_count() const { return samples_.size(); }
    std::vector<double> xs() const;
    std::vector<double> ys() const;

    // Stable content hash of the exact sample bits, "fnv1a64:<hex>".
    std::string digest() const;

private:
    std::vector<CalibrationSample> samples_;
};

// Model families in their canonical order; the order breaks selection ties.
enum class ModelFamily { linear, polynomial, logarithmic, power, exponential };

inline constexpr std::array<ModelFamily, 5> kAllFamilies{ModelFamily::linear, ModelFamily::polynomial,
                                                         ModelFamily::logarithmic, ModelFamily::power,
                                                         ModelFamily::exponential};

inline constexpr int kDefaultPolynomialDegree = 2;
inline constexpr int kMaxPolynomialDegree = 6;

std::string_view to_string(ModelFamily family);
std::optional<ModelFamily> parse_family(std::string_view name);

struct ModelKind {
    ModelFamily family = ModelFamily::linear;
    std::optional<int> degree;  // polynomial only

    static ModelKind of(ModelFamily family, int polynomial_degree = kDefaultPolynomialDegree);
    std::size_t coefficient_count() const;
    std::string label() const;  // "polynomial(2)", "linear", ...

    friend bool operator==(const ModelKind&, const ModelKind&) = default;
};

enum class FitMethod { raw_ols, log_linearized };

std::string_view to_string(FitMethod method);
std::optional<FitMethod> parse_fit_method(std::string_view name);

// Coefficient layout (beta_0 first):
//   linear       y = b0 + b1 x
//   polynomial   y = b0 + b1 x + ... + bd x^d
//   logarithmic  y = b0 ln(x) + b1
//   power        y = b0 x^b1
//   exponential  y = b0 exp(b1 x)
struct FittedModel {
    ModelKind kind;
    std::vector<double> coefficients;
    FitMethod fit_method = FitMethod::raw_ols;
    std::string trained_on;
    std::size_t sample_count = 0;
    // Polynomial only: 2-norm condition number of the centered, scaled design.
    std::optional<double> condition_number;
};

// Least-squares fit of one family. Power and exponential are fitted by OLS in
// log space and back-transformed.
// Throws DomainError naming the first sample outside the family's domain and
// DegenerateError on a rank-deficient design.
FittedModel fit(const CalibrationDataset& data, const ModelKind& kind);

// Throws DomainError when x is outside the family's domain (x <= 0 for
// logarithmic and power).
double predict(const FittedModel& model, double x);

// predict(x_i) - y_i for every sample.
ResidualSeries residuals(const FittedModel& model, const CalibrationDataset& data);

std::vector<double> predictions(const FittedModel& model, const CalibrationDataset& data);

}  // namespace ddos

#endif  // DDOS_REGRESSION_HPP

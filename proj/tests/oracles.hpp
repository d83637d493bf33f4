// Independent reference computations used only by tests. Nothing here calls
// into the library's fitting or entropy code.
#ifndef DDOS_TESTS_ORACLES_HPP
#define DDOS_TESTS_ORACLES_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

// -sum p log2 p evaluated in 50-digit arithmetic.
inline double entropy_bits(std::span<const std::uint64_t> counts) {
    big total = 0;
    for (auto c : counts) {
        total += big(c);
    }
    if (total == 0) {
        return 0.0;
    }
    big h = 0;
    const big ln2 = boost::multiprecision::log(big(2));
    for (auto c : counts) {
        if (c == 0) {
            continue;
        }
        const big p = big(c) / total;
        h -= p * boost::multiprecision::log(p) / ln2;
    }
    return static_cast<double>(h);
}

// Least squares polynomial via normal equations and Gaussian elimination in
// 50-digit arithmetic. Returns beta_0..beta_degree.
inline std::vector<double> polyfit_normal_equations(std::span<const double> xs, std::span<const double> ys,
                                                    int degree) {
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    std::vector<std::vector<big>> a(m, std::vector<big>(m + 1, big(0)));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<big> pw(2 * m, big(1));
        for (std::size_t k = 1; k < 2 * m; ++k) {
            pw[k] = pw[k - 1] * big(xs[i]);
        }
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                a[r][c] += pw[r + c];
            }
            a[r][m] += pw[r] * big(ys[i]);
        }
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (abs(a[r][col]) > abs(a[piv][col])) {
                piv = r;
            }
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) {
                continue;
            }
            const big f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    std::vector<double> beta(m);
    for (std::size_t r = 0; r < m; ++r) {
        beta[r] = static_cast<double>(a[r][m] / a[r][r]);
    }
    return beta;
}

// Intercept and slope from the 2x2 normal equations (Cramer's rule, 50 digits).
inline std::pair<double, double> line_cramer(std::span<const double> xs, std::span<const double> ys) {
    big n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += big(xs[i]);
        sy += big(ys[i]);
        sxx += big(xs[i]) * big(xs[i]);
        sxy += big(xs[i]) * big(ys[i]);
    }
    const big det = n * sxx - sx * sx;
    return {static_cast<double>((sy * sxx - sx * sxy) / det), static_cast<double>((n * sxy - sx * sy) / det)};
}

inline double sse_of(std::span<const double> xs, std::span<const double> ys, auto&& model) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = model(xs[i]) - ys[i];
        s += e * e;
    }
    return s;
}

// Zooming grid search for the SSE-minimizing line. Starts from a box wide
// enough to contain any reasonable line through the data and refines 40 times.
inline double grid_search_line_sse(std::span<const double> xs, std::span<const double> ys) {
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    const double yspan = std::max(1.0, *ymax - *ymin);
    const double xspan = std::max(1e-9, *xmax - *xmin);
    const double xabs = std::max(std::abs(*xmin), std::abs(*xmax));
    double slope_c = 0.0, slope_r = 8.0 * yspan / xspan;
    double icpt_c = 0.5 * (*ymin + *ymax), icpt_r = 4.0 * yspan + slope_r * xabs;
    double best = std::numeric_limits<double>::infinity();
    constexpr int kSteps = 40;
    for (int iter = 0; iter < 40; ++iter) {
        double bs = slope_c, bi = icpt_c;
        for (int i = -kSteps; i <= kSteps; ++i) {
            for (int j = -kSteps; j <= kSteps; ++j) {
                const double s = slope_c + slope_r * i / kSteps;
                const double c = icpt_c + icpt_r * j / kSteps;
                const double v = sse_of(xs, ys, [&](double x) { return c + s * x; });
                if (v < best) {
                    best = v;
                    bs = s;
                    bi = c;
                }
            }
        }
        slope_c = bs;
        icpt_c = bi;
        slope_r *= 0.25;
        icpt_r *= 0.25;
    }
    return best;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> a, std::span<const double> b) {
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
                ++j;
            }
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle

#endif  // DDOS_TESTS_ORACLES_HPP

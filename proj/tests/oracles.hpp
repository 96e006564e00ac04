#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

/// Residual sum of squares of the orthogonal projection of y onto the span of
/// `columns`, by long-double modified Gram-Schmidt with one reorthogonalization
/// pass. Columns that vanish after orthogonalization are skipped (rank loss).
inline long double projection_residual(std::vector<std::vector<long double>> columns,
                                       std::vector<long double> y) {
    std::vector<std::vector<long double>> basis;
    for (auto& v : columns) {
        long double norm0 = 0;
        for (auto e : v) norm0 += e * e;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                long double dot = 0;
                for (std::size_t i = 0; i < v.size(); ++i) dot += q[i] * v[i];
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * q[i];
            }
        }
        long double norm = 0;
        for (auto e : v) norm += e * e;
        if (norm <= 1e-24L * norm0 || norm == 0) continue;
        norm = std::sqrt(norm);
        for (auto& e : v) e /= norm;
        basis.push_back(std::move(v));
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            long double dot = 0;
            for (std::size_t i = 0; i < y.size(); ++i) dot += q[i] * y[i];
            for (std::size_t i = 0; i < y.size(); ++i) y[i] -= dot * q[i];
        }
    }
    long double sse = 0;
    for (auto e : y) sse += e * e;
    return sse;
}

inline std::vector<std::vector<long double>> monomial_columns(const std::vector<double>& xs, int degree) {
    std::vector<std::vector<long double>> cols(static_cast<std::size_t>(degree) + 1,
                                               std::vector<long double>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        long double power = 1;
        for (int k = 0; k <= degree; ++k) {
            cols[static_cast<std::size_t>(k)][i] = power;
            power *= xs[i];
        }
    }
    return cols;
}

inline std::vector<std::vector<long double>> trig_columns(const std::vector<double>& xs, int modes) {
    const long double pi = 3.141592653589793238462643383279502884L;
    std::vector<std::vector<long double>> cols;
    cols.emplace_back(xs.size(), 1.0L);
    for (int k = 1; k <= modes; ++k) {
        std::vector<long double> c(xs.size()), s(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            c[i] = std::cos(2.0L * k * pi * xs[i]);
            s[i] = std::sin(2.0L * k * pi * xs[i]);
        }
        cols.push_back(std::move(c));
        cols.push_back(std::move(s));
    }
    return cols;
}

inline double two_pass_sse(const std::vector<double>& ys) {
    if (ys.empty()) return 0.0;
    long double mean = 0;
    for (double y : ys) mean += y;
    mean /= ys.size();
    long double sse = 0;
    for (double y : ys) sse += (y - mean) * (y - mean);
    return static_cast<double>(sse);
}

struct Split {
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

/// Tries every midpoint between consecutive distinct x values; lowest
/// threshold wins ties.
inline Split best_single_split(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    Split best;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (!(sorted[k] < sorted[k + 1])) continue;
        const double t = 0.5 * (sorted[k] + sorted[k + 1]);
        std::vector<double> left, right;
        for (std::size_t i = 0; i < xs.size(); ++i) (xs[i] <= t ? left : right).push_back(ys[i]);
        const double sse = two_pass_sse(left) + two_pass_sse(right);
        if (sse < best.sse - 1e-12 * std::max(1.0, std::abs(sse))) best = {t, sse};
    }
    return best;
}

/// Lower convex hull (Andrew's monotone chain) of points sorted by x; collinear
/// interior points dropped. Returns hull vertex indices.
inline std::vector<std::size_t> lower_hull(const std::vector<std::pair<double, double>>& pts) {
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (h.size() >= 2) {
            const auto& o = pts[h[h.size() - 2]];
            const auto& a = pts[h.back()];
            const auto& b = pts[i];
            const long double cross = static_cast<long double>(a.first - o.first) * (b.second - o.second) -
                                      static_cast<long double>(a.second - o.second) * (b.first - o.first);
            if (cross <= 0) h.pop_back();
            else break;
        }
        h.push_back(i);
    }
    return h;
}

/// Value at x of the lower convex envelope of `pts` (x within the hull range).
inline double hull_value(const std::vector<std::pair<double, double>>& pts, double x) {
    const auto h = lower_hull(pts);
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
        const auto& a = pts[h[k]];
        const auto& b = pts[h[k + 1]];
        if (x >= a.first && x <= b.first) {
            const long double t = (x - a.first) / static_cast<long double>(b.first - a.first);
            return static_cast<double>(a.second + t * (b.second - a.second));
        }
    }
    return pts[h.front()].second;
}

} // namespace oracle

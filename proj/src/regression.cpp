#include "landscape/regression.hpp"

#include "landscape/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace landscape {

LinearFit least_squares(const Eigen::MatrixXd& design, std::span<const double> y) {
    if (static_cast<std::size_t>(design.rows()) != y.size()) {
        throw InvalidArgument(fmt::format("design has {} rows but {} targets", design.rows(), y.size()));
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);

    LinearFit fit;
    fit.coefficients = cod.solve(rhs);
    fit.rank = cod.rank();
    if (!fit.coefficients.allFinite()) {
        throw NumericalError("least-squares solve produced non-finite coefficients");
    }
    return fit;
}

Eigen::MatrixXd polynomial_design(std::span<const double> xs, int degree) {
    const auto rows = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd design(rows, degree + 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = 2.0 * xs[static_cast<std::size_t>(i)] - 1.0;
        // Bonnet recursion: (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}
        double previous = 1.0;
        double current = t;
        design(i, 0) = 1.0;
        if (degree >= 1) design(i, 1) = t;
        for (int k = 1; k < degree; ++k) {
            const double next = ((2.0 * k + 1.0) * t * current - k * previous) / (k + 1.0);
            previous = current;
            current = next;
            design(i, k + 1) = next;
        }
    }
    return design;
}

Eigen::MatrixXd fourier_design(std::span<const double> xs, int max_mode) {
    const auto rows = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd design(rows, 2 * max_mode + 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        for (int k = 1; k <= max_mode; ++k) {
            const double phase = 2.0 * k * std::numbers::pi * x;
            design(i, 2 * k - 1) = std::cos(phase);
            design(i, 2 * k) = std::sin(phase);
        }
    }
    return design;
}

double sum_squared_error(std::span<const double> predicted, std::span<const double> observed) {
    if (predicted.size() != observed.size()) throw InvalidArgument("length mismatch in SSE");
    double total = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double r = predicted[i] - observed[i];
        total += r * r;
    }
    return total;
}

RegressionTree RegressionTree::grow(std::span<const double> xs, std::span<const double> ys,
                                    int max_depth) {
    if (xs.size() != ys.size()) throw InvalidArgument("tree: xs and ys differ in length");
    if (xs.empty()) throw InvalidArgument("tree: empty training set");
    if (max_depth < 0) throw InvalidArgument("tree: negative depth");

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    RegressionTree tree;
    tree.build(order, xs, ys, 0, max_depth);
    return tree;
}

int RegressionTree::build(std::span<const std::size_t> order, std::span<const double> xs,
                          std::span<const double> ys, int level, int max_depth) {
    const std::size_t n = order.size();
    double mean = 0.0;
    for (auto i : order) mean += ys[i];
    mean /= static_cast<double>(n);

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{0.0, mean, -1, -1, n});
    depth_ = std::max(depth_, level);
    if (level >= max_depth || n < 2) return id;

    // Prefix sums of centred targets keep SSE = sumsq - sum^2/n well conditioned.
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = ys[order[k]] - mean;
        prefix[k + 1] = prefix[k] + c;
        prefix_sq[k + 1] = prefix_sq[k] + c * c;
    }
    const auto segment_sse = [&](std::size_t begin, std::size_t end) {
        const double count = static_cast<double>(end - begin);
        const double s = prefix[end] - prefix[begin];
        return std::max(0.0, (prefix_sq[end] - prefix_sq[begin]) - s * s / count);
    };

    const double parent_sse = segment_sse(0, n);
    double best_sse = parent_sse;
    std::size_t best_cut = 0; // left child holds order[0, best_cut)
    for (std::size_t cut = 1; cut < n; ++cut) {
        if (!(xs[order[cut - 1]] < xs[order[cut]])) continue;
        const double children = segment_sse(0, cut) + segment_sse(cut, n);
        if (children < best_sse) {
            best_sse = children;
            best_cut = cut;
        }
    }
    if (best_cut == 0 || !(parent_sse - best_sse > 1e-12 * parent_sse)) return id;

    nodes_[static_cast<std::size_t>(id)].threshold =
        0.5 * (xs[order[best_cut - 1]] + xs[order[best_cut]]);
    const int left = build(order.first(best_cut), xs, ys, level + 1, max_depth);
    const int right = build(order.subspan(best_cut), xs, ys, level + 1, max_depth);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

double RegressionTree::predict(double x) const {
    std::size_t node = 0;
    while (!nodes_[node].is_leaf()) {
        node = static_cast<std::size_t>(x <= nodes_[node].threshold ? nodes_[node].left
                                                                     : nodes_[node].right);
    }
    return nodes_[node].value;
}

std::vector<double> RegressionTree::predict(std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [this](double x) { return predict(x); });
    return out;
}

} // namespace landscape

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace landscape {

struct LinearFit {
    Eigen::VectorXd coefficients;
    Eigen::Index rank = 0;
};

/// Minimum-norm least-squares solution of design * c ~ y through a complete
/// orthogonal decomposition. Rank-deficient designs are solved, not rejected.
LinearFit least_squares(const Eigen::MatrixXd& design, std::span<const double> y);

/// Columns P_0(t) .. P_degree(t) of Legendre polynomials at t = 2x - 1. Spans
/// exactly the polynomials of degree <= `degree` in x.
Eigen::MatrixXd polynomial_design(std::span<const double> xs, int degree);

/// Columns 1, cos(2 pi x), sin(2 pi x), ..., cos(2 d pi x), sin(2 d pi x).
Eigen::MatrixXd fourier_design(std::span<const double> xs, int max_mode);

double sum_squared_error(std::span<const double> predicted, std::span<const double> observed);

/// Greedy CART regression tree on a single real feature.
class RegressionTree {
public:
    struct Node {
        double threshold = 0.0; // x <= threshold goes left
        double value = 0.0;     // mean target of the samples reaching the node
        int left = -1;
        int right = -1;
        std::size_t samples = 0;

        bool is_leaf() const noexcept { return left < 0; }
    };

    /// Grows to at most `max_depth` levels of splits. A node stays a leaf when
    /// it holds one sample, has no two distinct x values, or no split lowers
    /// its squared error. Among equal-error splits the lowest threshold wins.
    static RegressionTree grow(std::span<const double> xs, std::span<const double> ys, int max_depth);

    double predict(double x) const;
    std::vector<double> predict(std::span<const double> xs) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    /// Depth actually reached (<= max_depth).
    int depth() const noexcept { return depth_; }

private:
    int build(std::span<const std::size_t> order, std::span<const double> xs,
              std::span<const double> ys, int level, int max_depth);

    std::vector<Node> nodes_;
    int depth_ = 0;
};

} // namespace landscape

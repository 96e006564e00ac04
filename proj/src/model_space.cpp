#include "landscape/model_space.hpp"

#include "landscape/csv.hpp"
#include "landscape/errors.hpp"
#include "landscape/regression.hpp"

#include <cmath>

#include <fmt/format.h>

namespace landscape {

std::string_view to_string(Family family) noexcept {
    switch (family) {
    case Family::Polynomial: return "polynomial";
    case Family::Fourier: return "fourier";
    case Family::Tree: return "tree";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view text) noexcept {
    if (text == "polynomial" || text == "poly") return Family::Polynomial;
    if (text == "fourier") return Family::Fourier;
    if (text == "tree") return Family::Tree;
    return std::nullopt;
}

int family_complexity(Family family, int index) noexcept {
    switch (family) {
    case Family::Polynomial: return index + 1;
    case Family::Fourier: return 2 * index + 1;
    case Family::Tree: return index;
    }
    return index;
}

ModelSpace::ModelSpace(std::vector<ModelPoint> points, std::string dataset_ref)
    : points_(std::move(points)), dataset_ref_(std::move(dataset_ref)) {
    if (points_.empty()) throw InvalidArgument("model space must be nonempty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.complexity < 0) {
            throw InvalidArgument(fmt::format("point {}: negative complexity", i));
        }
        if (i > 0 && p.complexity <= points_[i - 1].complexity) {
            throw InvalidArgument(fmt::format(
                "point {}: complexities must be strictly increasing ({} after {})", i, p.complexity,
                points_[i - 1].complexity));
        }
        for (double loss : {p.train_loss, p.test_loss_clean, p.test_loss_noisy}) {
            if (!std::isfinite(loss) || loss < 0.0) {
                throw InvalidArgument(fmt::format("point {}: losses must be finite and >= 0", i));
            }
        }
    }
}

namespace {

void check_train_set(const Dataset& dataset) {
    if (dataset.n_train() < 2 || dataset.ys_train.size() != dataset.n_train()) {
        throw InvalidArgument("dataset needs at least 2 aligned train samples");
    }
    if (dataset.ys_test_clean.size() != dataset.n_test() ||
        dataset.ys_test_noisy.size() != dataset.n_test()) {
        throw InvalidArgument("dataset test arrays are misaligned");
    }
}

ModelPoint fit_linear(const Dataset& dataset, Family family, int index, int columns,
                      Eigen::MatrixXd (*design)(std::span<const double>, int)) {
    check_train_set(dataset);
    if (index < 0) throw InvalidArgument(fmt::format("{} index must be >= 0", to_string(family)));
    if (static_cast<std::size_t>(columns) > dataset.n_train()) {
        throw InvalidArgument(fmt::format("{} index {} needs {} coefficients but n_train = {}",
                                          to_string(family), index, columns, dataset.n_train()));
    }

    const auto fit = least_squares(design(dataset.xs, index), dataset.ys_train);
    const auto score = [&](std::span<const double> xs, std::span<const double> ys) {
        if (xs.empty()) return 0.0;
        const Eigen::VectorXd predicted = design(xs, index) * fit.coefficients;
        return sum_squared_error({predicted.data(), static_cast<std::size_t>(predicted.size())}, ys);
    };

    ModelPoint point;
    point.family = family;
    point.param_index = index;
    point.complexity = family_complexity(family, index);
    point.train_loss = score(dataset.xs, dataset.ys_train);
    point.test_loss_clean = score(dataset.xs_test, dataset.ys_test_clean);
    point.test_loss_noisy = score(dataset.xs_test, dataset.ys_test_noisy);
    if (!std::isfinite(point.train_loss) || !std::isfinite(point.test_loss_clean) ||
        !std::isfinite(point.test_loss_noisy)) {
        throw NumericalError(fmt::format("{} index {}: non-finite loss", to_string(family), index));
    }
    return point;
}

} // namespace

ModelPoint fit_polynomial(const Dataset& dataset, int degree) {
    return fit_linear(dataset, Family::Polynomial, degree, degree + 1, &polynomial_design);
}

ModelPoint fit_fourier(const Dataset& dataset, int max_mode) {
    return fit_linear(dataset, Family::Fourier, max_mode, 2 * max_mode + 1, &fourier_design);
}

ModelPoint fit_tree(const Dataset& dataset, int depth) {
    check_train_set(dataset);
    if (depth < 0) throw InvalidArgument("tree depth must be >= 0");
    const auto tree = RegressionTree::grow(dataset.xs, dataset.ys_train, depth);

    ModelPoint point;
    point.family = Family::Tree;
    point.param_index = depth;
    point.complexity = depth;
    point.train_loss = sum_squared_error(tree.predict(dataset.xs), dataset.ys_train);
    const auto test = tree.predict(dataset.xs_test);
    point.test_loss_clean = sum_squared_error(test, dataset.ys_test_clean);
    point.test_loss_noisy = sum_squared_error(test, dataset.ys_test_noisy);
    return point;
}

ModelPoint fit_model(const Dataset& dataset, Family family, int index) {
    switch (family) {
    case Family::Polynomial: return fit_polynomial(dataset, index);
    case Family::Fourier: return fit_fourier(dataset, index);
    case Family::Tree: return fit_tree(dataset, index);
    }
    throw InvalidArgument("unknown family");
}

int max_admissible_index(const Dataset& dataset, Family family) noexcept {
    const auto n = static_cast<int>(dataset.n_train());
    switch (family) {
    case Family::Polynomial: return n - 1;
    case Family::Fourier: return (n - 1) / 2;
    case Family::Tree: return 64;
    }
    return 0;
}

ModelSpace enumerate_space(const Dataset& dataset, Family family, int max_index) {
    if (max_index < 0) throw InvalidArgument("max_index must be >= 0");
    std::vector<ModelPoint> points;
    points.reserve(static_cast<std::size_t>(max_index) + 1);
    for (int index = 0; index <= max_index; ++index) {
        try {
            points.push_back(fit_model(dataset, family, index));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(fmt::format("index {}: {}", index, e.what()));
        } catch (const NumericalError& e) {
            throw NumericalError(fmt::format("index {}: {}", index, e.what()));
        }
    }
    return ModelSpace(std::move(points), dataset.identifier());
}

void write_space_csv(const ModelSpace& space, const std::filesystem::path& path) {
    csv::Writer out(path, {"complexity", "param_index", "train_sse", "test_sse_clean", "test_sse_noisy"});
    for (const auto& p : space) {
        out.row({std::to_string(p.complexity), std::to_string(p.param_index),
                 csv::format_exact(p.train_loss), csv::format_exact(p.test_loss_clean),
                 csv::format_exact(p.test_loss_noisy)});
    }
    out.close();
}

ModelSpace read_space_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto c = table.column("complexity");
    const auto train = table.column("train_sse");
    const auto optional_column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == name) return i;
        }
        return std::nullopt;
    };
    const auto index = optional_column("param_index");
    const auto clean = optional_column("test_sse_clean");
    const auto noisy = optional_column("test_sse_noisy");

    std::vector<ModelPoint> points;
    for (const auto& row : table.rows) {
        ModelPoint p;
        p.complexity = static_cast<int>(csv::parse_integer(row[c]));
        p.train_loss = csv::parse_double(row[train]);
        if (index) p.param_index = static_cast<int>(csv::parse_integer(row[*index]));
        if (clean) p.test_loss_clean = csv::parse_double(row[*clean]);
        if (noisy) p.test_loss_noisy = csv::parse_double(row[*noisy]);
        points.push_back(p);
    }
    try {
        return ModelSpace(std::move(points), path.filename().string());
    } catch (const InvalidArgument& e) {
        throw IoError(fmt::format("'{}': {}", path.string(), e.what()));
    }
}

} // namespace landscape

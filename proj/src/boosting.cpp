#include "treecdf/boosting.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "treecdf/parallel.hpp"

namespace treecdf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_cube_data(const DataMatrix& data) {
    if (data.rows == 0)
        throw std::invalid_argument("fit: empty data rejected");
    if (data.cols == 0)
        throw std::invalid_argument("fit: data has no columns");
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t j = 0; j < data.cols; ++j) {
            const double v = data.at(i, j);
            if (!std::isfinite(v))
                throw std::invalid_argument(
                    "fit: non-finite coordinate rejected");
            if (!(v > 0.0 && v <= 1.0))
                throw std::invalid_argument(
                    "fit: coordinate outside the unit cube (0,1]");
        }
    }
}

// Improvement and its per-dimension split in one pass over the tree. Both
// come from the counts recorded at fit time: each interior node contributes
// n(A_l)/n * log(theta/mu_l) + n(A_r)/n * log((1-theta)/mu_r).
struct NodeSums {
    double improvement = 0.0;
    std::vector<double> per_dim;
};

NodeSums node_sums(const TreeMeasure& measure, std::size_t n_total,
                   int dimension) {
    NodeSums sums;
    sums.per_dim.assign(dimension, 0.0);
    const double n = static_cast<double>(n_total);
    for_each_node(measure.tree.root, [&](const SplitNode& node) {
        if (node.is_leaf() || node.count == 0) return;
        const double mu_left = node.uniform_left();
        const double n_left = static_cast<double>(node.left->count);
        const double n_right = static_cast<double>(node.right->count);
        double term = 0.0;
        if (n_left > 0) term += n_left / n * std::log(node.theta / mu_left);
        if (n_right > 0)
            term += n_right / n * std::log((1.0 - node.theta) / (1.0 - mu_left));
        sums.improvement += term;
        sums.per_dim[node.split_dim] += term;
    });
    return sums;
}

}  // namespace

double Ensemble::training_mean_log_density() const {
    return std::accumulate(improvements.begin(), improvements.end(), 0.0);
}

Ensemble fit(const DataMatrix& data, const FitConfig& config) {
    validate_cube_data(data);
    if (!(config.c0 > 0.0 && config.c0 <= 1.0))
        throw std::invalid_argument("fit: c0 must be in (0,1]");
    if (config.gamma < 0.0)
        throw std::invalid_argument("fit: gamma must be >= 0");
    if (config.trees_per_margin < 0 || config.trees_copula < 0)
        throw std::invalid_argument("fit: tree counts must be >= 0");

    const int d = static_cast<int>(data.cols);
    Ensemble model;
    model.dimension = d;
    model.config = config;
    model.importance.assign(d, 0.0);

    DataMatrix residuals = data;
    Rng rng(config.seed, Stream::tree_fit);

    const auto one_iteration = [&](std::optional<int> restriction) {
        LearnerConfig learner = config.learner;
        learner.dim_restriction = restriction;
        PartitionTree tree = fit_tree(residuals, learner, rng);
        TreeMeasure measure =
            apply_shrinkage(std::move(tree), config.c0, config.gamma,
                            restriction);
        const NodeSums sums = node_sums(measure, data.rows, d);
        parallel_for(residuals.rows, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                forward_inplace(measure, residuals.row(i));
        });
        model.trees.push_back(std::move(measure));
        model.improvements.push_back(sums.improvement);
        for (int j = 0; j < d; ++j) model.importance[j] += sums.per_dim[j];
        return sums.improvement;
    };

    if (config.two_stage) {
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < config.trees_per_margin; ++t) one_iteration(j);
    }

    double window_sum = 0.0;
    for (int t = 0; t < config.trees_copula; ++t) {
        window_sum += one_iteration(std::nullopt);
        const int w = config.early_stop_window;
        if (w > 0 && t + 1 >= w) {
            if (t + 1 > w) {
                const std::size_t k = model.improvements.size() - 1 - w;
                window_sum -= model.improvements[k];
            }
            if (window_sum / w < config.early_stop_threshold) break;
        }
    }
    return model;
}

std::vector<double> residualize(const Ensemble& model,
                                std::span<const double> x, std::size_t upto) {
    if (upto > model.size())
        throw std::invalid_argument("residualize: upto exceeds tree count");
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t k = 0; k < upto; ++k)
        forward_inplace(model.trees[k], out);
    return out;
}

double log_density(const Ensemble& model, std::span<const double> x,
                   bool original_scale) {
    if (static_cast<int>(x.size()) != model.dimension)
        throw std::invalid_argument("log_density: dimension mismatch");
    std::vector<double> point(x.begin(), x.end());
    double total = 0.0;
    if (original_scale) {
        if (!model.preprocess)
            throw std::invalid_argument(
                "log_density: model has no preprocessing record");
        if (!model.preprocess->to_cube(x, point)) return kNegInf;
        total = model.preprocess->log_jacobian;
    } else {
        for (double v : point)
            if (!(v > 0.0 && v <= 1.0)) return kNegInf;
    }
    for (const TreeMeasure& measure : model.trees)
        total += forward_logdensity_inplace(measure, point);
    return total;
}

DataMatrix sample(const Ensemble& model, std::size_t count, Rng& rng,
                  bool original_scale) {
    if (count == 0)
        throw std::invalid_argument("sample: count must be >= 1");
    if (original_scale && !model.preprocess)
        throw std::invalid_argument("sample: model has no preprocessing record");
    const std::size_t d = static_cast<std::size_t>(model.dimension);
    DataMatrix draws(count, d);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < d; ++j)
            draws.at(i, j) = rng.next_unit_oc();
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
        std::vector<double> original(d);
        for (std::size_t i = begin; i < end; ++i) {
            auto row = draws.row(i);
            for (std::size_t k = model.size(); k-- > 0;)
                inverse_inplace(model.trees[k], row);
            if (original_scale) {
                model.preprocess->from_cube(row, original);
                for (std::size_t j = 0; j < d; ++j) row[j] = original[j];
            }
        }
    });
    return draws;
}

double improvement(const TreeMeasure& measure, const DataMatrix& residuals) {
    if (residuals.rows == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < residuals.rows; ++i)
        sum += log_density(measure, residuals.row(i));
    return sum / static_cast<double>(residuals.rows);
}

std::vector<double> importance_contribution(const TreeMeasure& measure,
                                            std::size_t n_total,
                                            int dimension) {
    return node_sums(measure, n_total, dimension).per_dim;
}

}  // namespace treecdf

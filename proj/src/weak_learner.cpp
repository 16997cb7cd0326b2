#include "treecdf/weak_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace treecdf {

namespace {

double log_beta(double p, double q) {
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

struct Grower {
    const DataMatrix& data;
    const LearnerConfig& cfg;
    Rng& rng;
    std::vector<std::uint32_t> index;
    int max_depth_seen = 1;

    // Candidate cut coordinates for the current node, per dimension. The cut
    // arithmetic matches SplitNode::make_split exactly so the counts below
    // agree with later point location.
    std::vector<double> cuts;
    std::vector<std::int64_t> bucket;

    void grow(SplitNode& node, int depth, std::uint32_t* begin,
              std::uint32_t* end);
};

void Grower::grow(SplitNode& node, int depth, std::uint32_t* begin,
                  std::uint32_t* end) {
    node.count = end - begin;
    max_depth_seen = std::max(max_depth_seen, depth);
    if (depth >= cfg.max_depth || node.count < cfg.min_count) return;

    const int d = node.region.dim();
    const int n_loc = cfg.grid_size - 1;
    const double stop = score_stop(node, cfg);

    std::vector<SplitCandidate> candidates;
    std::vector<std::vector<std::int64_t>> left_counts;  // per dim, per l
    const int dim_begin = cfg.dim_restriction ? *cfg.dim_restriction : 0;
    const int dim_end = cfg.dim_restriction ? dim_begin + 1 : d;
    left_counts.resize(d);

    for (int j = dim_begin; j < dim_end; ++j) {
        const double a = node.region.lower[j];
        const double b = node.region.upper[j];
        cuts.assign(n_loc + 1, 0.0);
        for (int l = 1; l <= n_loc; ++l)
            cuts[l] = a + (static_cast<double>(l) / cfg.grid_size) * (b - a);

        // Bucket sweep: bucket l holds points with cuts[l-1] < x <= cuts[l],
        // bucket N_L the remainder. A float-estimated index is corrected
        // against the actual cut values so the counts agree exactly with the
        // <= comparisons used at split time.
        bucket.assign(cfg.grid_size + 1, 0);
        for (std::uint32_t* it = begin; it != end; ++it) {
            const double v = data.at(*it, j);
            int k = 1 + static_cast<int>((v - a) / (b - a) * cfg.grid_size);
            k = std::clamp(k, 1, cfg.grid_size);
            while (k < cfg.grid_size && v > cuts[k]) ++k;
            while (k > 1 && v <= cuts[k - 1]) --k;
            ++bucket[k];
        }
        auto& lc = left_counts[j];
        lc.assign(n_loc + 1, 0);
        std::int64_t running = 0;
        for (int l = 1; l <= n_loc; ++l) {
            running += bucket[l];
            lc[l] = running;
        }

        for (int l = 1; l <= n_loc; ++l) {
            if (cuts[l] - a < kMinChildWidth || b - cuts[l] < kMinChildWidth)
                continue;  // degenerate child, candidate dropped
            const double fraction = static_cast<double>(l) / cfg.grid_size;
            const std::int64_t n_left = lc[l];
            candidates.push_back(
                {j, l,
                 score_split(node, j, fraction, n_left, node.count - n_left,
                             cfg)});
        }
    }

    const Decision decision = sample_decision(stop, candidates, rng);
    if (decision.stop) return;

    node.make_split(decision.dim,
                    static_cast<double>(decision.loc_index) / cfg.grid_size);
    const double cut = node.cut;
    const int j = decision.dim;
    std::uint32_t* mid =
        std::partition(begin, end, [&](std::uint32_t row) {
            return data.at(row, j) <= cut;
        });
    node.empirical_left =
        node.count > 0
            ? static_cast<double>(mid - begin) / static_cast<double>(node.count)
            : node.uniform_left();
    grow(*node.left, depth + 1, begin, mid);
    grow(*node.right, depth + 1, mid, end);
}

}  // namespace

double log_beta_ratio(double theta0, std::int64_t n_left,
                      std::int64_t n_right) {
    if (!(theta0 > 0.0 && theta0 < 1.0))
        throw std::invalid_argument("log_beta_ratio: theta0 must be in (0,1)");
    return log_beta(theta0 + static_cast<double>(n_left),
                    1.0 - theta0 + static_cast<double>(n_right)) -
           log_beta(theta0, 1.0 - theta0);
}

double score_stop(const SplitNode& node, const LearnerConfig& cfg) {
    return std::log(cfg.stop_prior) -
           static_cast<double>(node.count) * std::log(volume(node.region));
}

double score_split(const SplitNode& node, int dim, double fraction,
                   std::int64_t n_left, std::int64_t n_right,
                   const LearnerConfig& cfg) {
    const double a = node.region.lower[dim];
    const double b = node.region.upper[dim];
    const double cut = a + fraction * (b - a);
    const double theta0 = (cut - a) / (b - a);
    const double log_vol = std::log(volume(node.region));
    const int d_eff = cfg.dim_restriction ? 1 : node.region.dim();
    const double log_prior =
        std::log1p(-cfg.stop_prior) -
        std::log(static_cast<double>(d_eff) * (cfg.grid_size - 1));
    const double n_total = static_cast<double>(n_left + n_right);
    return log_prior + log_beta_ratio(theta0, n_left, n_right) -
           n_total * log_vol -
           static_cast<double>(n_left) * std::log(theta0) -
           static_cast<double>(n_right) * std::log1p(-theta0);
}

Decision sample_decision(double stop_score,
                         std::span<const SplitCandidate> candidates,
                         Rng& rng) {
    double max_score = stop_score;
    for (const auto& c : candidates) max_score = std::max(max_score, c.log_score);
    const double stop_weight = std::exp(stop_score - max_score);
    double total = stop_weight;
    for (const auto& c : candidates) total += std::exp(c.log_score - max_score);

    const double target = rng.next_unit_co() * total;
    if (target < stop_weight) return {true, 0, 0};
    double running = stop_weight;
    for (const auto& c : candidates) {
        running += std::exp(c.log_score - max_score);
        if (target < running) return {false, c.dim, c.loc_index};
    }
    // Rounding pushed the target past the last cumulative weight.
    const auto& last = candidates.back();
    return {false, last.dim, last.loc_index};
}

PartitionTree fit_tree(const DataMatrix& residuals, const LearnerConfig& cfg,
                       Rng& rng) {
    if (cfg.grid_size < 2)
        throw std::invalid_argument("fit_tree: grid_size must be >= 2");
    if (!(cfg.stop_prior > 0.0 && cfg.stop_prior < 1.0))
        throw std::invalid_argument("fit_tree: stop_prior must be in (0,1)");
    if (cfg.max_depth < 1)
        throw std::invalid_argument("fit_tree: max_depth must be >= 1");
    if (cfg.dim_restriction &&
        (*cfg.dim_restriction < 0 ||
         *cfg.dim_restriction >= static_cast<int>(residuals.cols)))
        throw std::invalid_argument("fit_tree: dim_restriction out of range");

    PartitionTree tree = single_node_tree(static_cast<int>(residuals.cols));
    Grower grower{residuals, cfg, rng, {}, 1, {}, {}};
    grower.index.resize(residuals.rows);
    for (std::size_t i = 0; i < residuals.rows; ++i)
        grower.index[i] = static_cast<std::uint32_t>(i);
    grower.grow(tree.root, 1, grower.index.data(),
                grower.index.data() + grower.index.size());
    tree.depth = grower.max_depth_seen;
    return tree;
}

double shrinkage_rate(double c0, double gamma, double node_volume) {
    return c0 * std::pow(1.0 - std::log2(node_volume), -gamma);
}

TreeMeasure apply_shrinkage(PartitionTree tree, double c0, double gamma,
                            std::optional<int> restriction) {
    if (!(c0 > 0.0 && c0 <= 1.0))
        throw std::invalid_argument("apply_shrinkage: c0 must be in (0,1]");
    if (gamma < 0.0)
        throw std::invalid_argument("apply_shrinkage: gamma must be >= 0");
    for_each_node(tree.root, [&](SplitNode& node) {
        if (node.is_leaf()) return;
        const double c = shrinkage_rate(c0, gamma, volume(node.region));
        const double mu_left = node.uniform_left();
        const double empirical =
            node.count > 0 ? node.empirical_left : mu_left;
        node.theta = (1.0 - c) * mu_left + c * empirical;
        node.theta = std::clamp(node.theta, kThetaClamp, 1.0 - kThetaClamp);
    });
    return TreeMeasure{std::move(tree), restriction};
}

}  // namespace treecdf

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "treecdf/geometry.hpp"
#include "treecdf/matrix.hpp"
#include "treecdf/rng.hpp"
#include "treecdf/tree_cdf.hpp"

namespace treecdf {

struct LearnerConfig {
    int grid_size = 128;  // N_L; candidate cuts at l/N_L for l = 1..N_L-1
    double stop_prior = 0.5;
    int max_depth = 50;
    int min_count = 5;  // nodes with fewer residuals are never split
    std::optional<int> dim_restriction;
};

struct SplitCandidate {
    int dim = 0;
    int loc_index = 0;  // l; the cut fraction is l / grid_size
    double log_score = 0.0;
};

// log Be(theta0 + n_left, 1 - theta0 + n_right) - log Be(theta0, 1 - theta0),
// the marginal likelihood ratio of the Beta model over its prior.
double log_beta_ratio(double theta0, std::int64_t n_left, std::int64_t n_right);

// log of the stopping weight: log stop_prior - n(A) * log vol(A).
double score_stop(const SplitNode& node, const LearnerConfig& cfg);

// log of the splitting weight for the candidate cut at `fraction` along
// `dim`: split prior + Beta marginal ratio + uniform likelihood of the two
// children. theta0 is the left child's conditional volume.
double score_split(const SplitNode& node, int dim, double fraction,
                   std::int64_t n_left, std::int64_t n_right,
                   const LearnerConfig& cfg);

struct Decision {
    bool stop = true;
    int dim = 0;
    int loc_index = 0;
};

// Draws one option proportionally to the exponentiated log-scores,
// normalized with a max shift. The stop option is always present and finite.
Decision sample_decision(double stop_score,
                         std::span<const SplitCandidate> candidates, Rng& rng);

// Grows one partition tree over the residuals by stochastic top-down
// splitting: each active node scores the stop option and every valid
// (dimension, grid location) cut, samples a decision, and recurses. Counts
// and empirical left-child fractions are recorded on the nodes.
PartitionTree fit_tree(const DataMatrix& residuals, const LearnerConfig& cfg,
                       Rng& rng);

// Scale-dependent learning rate c(A) = c0 * (1 - log2 vol)^(-gamma);
// equals c0 at the root and decreases for smaller nodes when gamma > 0.
double shrinkage_rate(double c0, double gamma, double node_volume);

// Pulls each interior node's empirical conditional toward the uniform one by
// its node rate and clamps the result away from {0,1}. Zero-count nodes keep
// the uniform conditional. Leaves stay conditionally uniform.
TreeMeasure apply_shrinkage(PartitionTree tree, double c0, double gamma,
                            std::optional<int> restriction = std::nullopt);

}  // namespace treecdf

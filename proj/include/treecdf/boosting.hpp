#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "treecdf/matrix.hpp"
#include "treecdf/preprocess.hpp"
#include "treecdf/rng.hpp"
#include "treecdf/tree_cdf.hpp"
#include "treecdf/weak_learner.hpp"

namespace treecdf {

struct FitConfig {
    double c0 = 0.1;
    double gamma = 0.0;
    int trees_per_margin = 100;
    int trees_copula = 2500;
    LearnerConfig learner;
    std::uint64_t seed = 0;
    bool two_stage = true;
    // Optional stage-2 early stop: terminate when the trailing window of
    // improvements averages below the threshold. The default threshold of 0
    // never triggers because improvements are non-negative.
    int early_stop_window = 50;
    double early_stop_threshold = 0.0;
};

// Ordered additive ensemble of tree measures: marginal trees grouped by
// dimension first, then copula trees. Immutable once fitted; evaluation and
// sampling are pure.
struct Ensemble {
    int dimension = 0;
    std::vector<TreeMeasure> trees;    // fitting order
    std::vector<double> improvements;  // per-tree mean log-density gain
    std::vector<double> importance;    // per-dimension KL contribution
    std::optional<PreprocessRecord> preprocess;
    FitConfig config;

    std::size_t size() const { return trees.size(); }
    double training_mean_log_density() const;
};

// Forward-stagewise fit on data inside the unit cube. Stage 1 runs
// trees_per_margin iterations per dimension with the learner restricted to
// that dimension; stage 2 runs trees_copula unconstrained iterations.
// Residuals are pushed through each new tree's forward map in place.
Ensemble fit(const DataMatrix& data, const FitConfig& config);

// Composition of the first `upto` forward maps in fitting order.
std::vector<double> residualize(const Ensemble& model,
                                std::span<const double> x, std::size_t upto);

// Sum over trees of the per-tree log-density at the running residual. With
// original_scale the point is first mapped into the cube and the
// preprocessing log-Jacobian added; points outside the expanded box get
// -infinity rather than an exception.
double log_density(const Ensemble& model, std::span<const double> x,
                   bool original_scale = false);

// Inverse-CDF sampling: uniform cube draws pushed through the inverse maps
// in reverse fitting order, optionally mapped back to original coordinates.
DataMatrix sample(const Ensemble& model, std::size_t count, Rng& rng,
                  bool original_scale = false);

// Mean per-point log-density of one tree over its pre-update residual batch.
double improvement(const TreeMeasure& measure, const DataMatrix& residuals);

// Node-wise decomposition of a tree's improvement by split dimension, using
// the counts and conditionals recorded during fitting.
std::vector<double> importance_contribution(const TreeMeasure& measure,
                                            std::size_t n_total,
                                            int dimension);

}  // namespace treecdf

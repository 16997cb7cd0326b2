#pragma once

#include <optional>
#include <span>
#include <vector>

#include "treecdf/geometry.hpp"

namespace treecdf {

// Conditional masses are clamped into [kThetaClamp, 1 - kThetaClamp] on
// construction so every measure has full numerical support.
inline constexpr double kThetaClamp = 1e-12;

// A conditionally uniform probability measure on a partition tree: uniform
// within every leaf, fully determined by the interior-node conditional masses
// theta = G(A_l | A). Immutable after construction; the transforms below are
// pure and safe to call concurrently.
struct TreeMeasure {
    PartitionTree tree;
    // Set on marginal-stage trees that split a single dimension only.
    std::optional<int> restriction;
};

// One step of the tree-CDF: moves x along the split dimension of `node`
// toward the child with less conditional mass than the uniform. Only the
// split coordinate changes and the output stays inside node.region.
std::vector<double> local_move(const SplitNode& node,
                               std::span<const double> x);

// Exact inverse of local_move on the shared region. The branch is decided by
// y_j <= a_j + theta * (b_j - a_j), the image boundary of the left child.
std::vector<double> local_move_inverse(const SplitNode& node,
                                       std::span<const double> y);

// Whole-tree transform: locates the leaf once from the original point, then
// applies local moves along that fixed path from the leaf's parent up to the
// root. Each move keeps the point inside its node, so the branch decisions
// from the original path stay valid throughout.
void forward_inplace(const TreeMeasure& m, std::span<double> x);
std::vector<double> forward(const TreeMeasure& m, std::span<const double> x);

// Coarse-to-fine descent: at each interior node apply the inverse local move,
// then descend into the child containing the result.
void inverse_inplace(const TreeMeasure& m, std::span<double> u);
std::vector<double> inverse(const TreeMeasure& m, std::span<const double> u);

// Log of the piecewise-constant density: sum over the interior nodes on the
// leaf path of log(G(child | A) / mu(child | A)) for the child containing x.
double log_density(const TreeMeasure& m, std::span<const double> x);

// Fused transform + density accumulation: one tree walk instead of two.
double forward_logdensity_inplace(const TreeMeasure& m, std::span<double> x);

}  // namespace treecdf

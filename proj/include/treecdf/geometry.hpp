#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace treecdf {

// Axis-aligned half-open box prod_j (lower_j, upper_j] inside the unit cube.
// The lower endpoint is open, the upper endpoint closed, so any nested family
// of such boxes partitions its parent exactly.
struct Rect {
    std::vector<double> lower;
    std::vector<double> upper;

    int dim() const { return static_cast<int>(lower.size()); }
};

// Splits whose child width in the split dimension would fall below this are
// rejected; deep recursion would otherwise produce numerically empty boxes.
inline constexpr double kMinChildWidth = 1e-12;

Rect unit_cube(int d);

// Splits rect along `dim` at lower + fraction * width. The cut coordinate is
// computed here once and stored; everything downstream compares against the
// stored value so forward and inverse transforms see identical boundaries.
std::pair<Rect, Rect> split(const Rect& rect, int dim, double fraction);

double volume(const Rect& rect);

// True iff lower_j < x_j <= upper_j for every dimension.
bool contains(const Rect& rect, std::span<const double> x);

// One node of a recursive dyadic partition tree. Interior nodes carry the
// split geometry, the fitted conditional mass theta = G(A_l | A), and the
// empirical quantities recorded while fitting (count, empirical_left).
struct SplitNode {
    Rect region;
    int split_dim = -1;  // -1 on leaves
    double split_fraction = 0.0;
    double cut = 0.0;  // absolute coordinate of the boundary
    double theta = 0.5;
    double empirical_left = 0.0;
    std::int64_t count = 0;
    std::unique_ptr<SplitNode> left;
    std::unique_ptr<SplitNode> right;

    bool is_leaf() const { return split_dim < 0; }

    // Conditional mass of the left child under the uniform measure.
    double uniform_left() const {
        const double a = region.lower[split_dim];
        const double b = region.upper[split_dim];
        return (cut - a) / (b - a);
    }

    // Turns a leaf into an interior node with children built via split().
    void make_split(int dim, double fraction);
};

struct PartitionTree {
    SplitNode root;
    int depth = 1;  // number of levels; a root-only tree has depth 1
};

PartitionTree single_node_tree(int d);

// Root-to-leaf chain of nodes containing x, unique by half-open semantics.
// A coordinate exactly on a cut routes to the left child.
std::vector<const SplitNode*> leaf_path(const PartitionTree& tree,
                                        std::span<const double> x);

// Allocation-free variant for hot paths; appends the chain to `out`.
void walk_leaf_path(const SplitNode& root, std::span<const double> x,
                    std::vector<const SplitNode*>& out);

template <typename Fn>
void for_each_node(const SplitNode& node, Fn&& fn) {
    fn(node);
    if (!node.is_leaf()) {
        for_each_node(*node.left, fn);
        for_each_node(*node.right, fn);
    }
}

template <typename Fn>
void for_each_node(SplitNode& node, Fn&& fn) {
    fn(node);
    if (!node.is_leaf()) {
        for_each_node(*node.left, fn);
        for_each_node(*node.right, fn);
    }
}

}  // namespace treecdf

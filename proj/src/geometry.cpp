#include "treecdf/geometry.hpp"

#include <stdexcept>
#include <string>

namespace treecdf {

Rect unit_cube(int d) {
    if (d < 1) throw std::invalid_argument("unit_cube: dimension must be >= 1");
    Rect rect;
    rect.lower.assign(static_cast<std::size_t>(d), 0.0);
    rect.upper.assign(static_cast<std::size_t>(d), 1.0);
    return rect;
}

std::pair<Rect, Rect> split(const Rect& rect, int dim, double fraction) {
    if (dim < 0 || dim >= rect.dim())
        throw std::invalid_argument("split: dimension index out of range");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split: fraction must lie in (0,1)");
    const double a = rect.lower[dim];
    const double b = rect.upper[dim];
    const double cut = a + fraction * (b - a);
    if (cut - a < kMinChildWidth || b - cut < kMinChildWidth)
        throw std::invalid_argument("split: child width below minimum");
    Rect left = rect;
    Rect right = rect;
    left.upper[dim] = cut;
    right.lower[dim] = cut;
    return {std::move(left), std::move(right)};
}

double volume(const Rect& rect) {
    double v = 1.0;
    for (int j = 0; j < rect.dim(); ++j) v *= rect.upper[j] - rect.lower[j];
    return v;
}

bool contains(const Rect& rect, std::span<const double> x) {
    if (static_cast<int>(x.size()) != rect.dim())
        throw std::invalid_argument("contains: dimension mismatch");
    for (int j = 0; j < rect.dim(); ++j) {
        if (!(x[j] > rect.lower[j] && x[j] <= rect.upper[j])) return false;
    }
    return true;
}

void SplitNode::make_split(int dim, double fraction) {
    auto [lo, hi] = split(region, dim, fraction);
    split_dim = dim;
    split_fraction = fraction;
    cut = lo.upper[dim];
    left = std::make_unique<SplitNode>();
    right = std::make_unique<SplitNode>();
    left->region = std::move(lo);
    right->region = std::move(hi);
    theta = uniform_left();
    empirical_left = theta;
}

PartitionTree single_node_tree(int d) {
    PartitionTree tree;
    tree.root.region = unit_cube(d);
    tree.depth = 1;
    return tree;
}

std::vector<const SplitNode*> leaf_path(const PartitionTree& tree,
                                        std::span<const double> x) {
    if (!contains(tree.root.region, x))
        throw std::invalid_argument("leaf_path: point outside the unit cube");
    std::vector<const SplitNode*> path;
    walk_leaf_path(tree.root, x, path);
    return path;
}

void walk_leaf_path(const SplitNode& root, std::span<const double> x,
                    std::vector<const SplitNode*>& out) {
    const SplitNode* node = &root;
    out.push_back(node);
    while (!node->is_leaf()) {
        node = x[node->split_dim] <= node->cut ? node->left.get()
                                               : node->right.get();
        out.push_back(node);
    }
}

}  // namespace treecdf

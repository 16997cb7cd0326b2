#include "treecdf/tree_cdf.hpp"

#include <cmath>
#include <stdexcept>

namespace treecdf {

namespace {

// Forward move of the split coordinate, branch already decided.
double move_coord(const SplitNode& node, double v, bool go_left) {
    const int j = node.split_dim;
    const double a = node.region.lower[j];
    const double b = node.region.upper[j];
    const double mu_left = node.uniform_left();
    double out;
    if (go_left) {
        out = a + (v - a) * (node.theta / mu_left);
    } else {
        out = b - (b - v) * ((1.0 - node.theta) / (1.0 - mu_left));
    }
    // Keep the result inside the half-open box in the face of rounding.
    if (out > b) out = b;
    if (out <= a) out = std::nextafter(a, b);
    return out;
}

struct InverseStep {
    double value;
    bool went_left;
};

// Inverse move of the split coordinate; the branch condition is the image
// boundary of the left child under the forward move.
InverseStep inverse_coord(const SplitNode& node, double v) {
    const int j = node.split_dim;
    const double a = node.region.lower[j];
    const double b = node.region.upper[j];
    const double c = node.cut;
    const double theta = node.theta;
    const double z = (v - a) / (b - a);
    InverseStep step;
    if (v <= a + theta * (b - a)) {
        step.went_left = true;
        step.value = a + (c - a) / theta * z;
        if (step.value > c) step.value = c;
        if (step.value <= a) step.value = std::nextafter(a, c);
    } else {
        step.went_left = false;
        step.value = c + (b - c) / (1.0 - theta) * (z - theta);
        if (step.value > b) step.value = b;
        if (step.value <= c) step.value = std::nextafter(c, b);
    }
    return step;
}

void require_interior_containing(const SplitNode& node,
                                 std::span<const double> x) {
    if (node.is_leaf())
        throw std::invalid_argument("local_move: node is a leaf");
    if (!contains(node.region, x))
        throw std::invalid_argument("local_move: point outside node region");
}

}  // namespace

std::vector<double> local_move(const SplitNode& node,
                               std::span<const double> x) {
    require_interior_containing(node, x);
    std::vector<double> out(x.begin(), x.end());
    const bool go_left = x[node.split_dim] <= node.cut;
    out[node.split_dim] = move_coord(node, x[node.split_dim], go_left);
    return out;
}

std::vector<double> local_move_inverse(const SplitNode& node,
                                       std::span<const double> y) {
    require_interior_containing(node, y);
    std::vector<double> out(y.begin(), y.end());
    out[node.split_dim] = inverse_coord(node, y[node.split_dim]).value;
    return out;
}

void forward_inplace(const TreeMeasure& m, std::span<double> x) {
    forward_logdensity_inplace(m, x);
}

std::vector<double> forward(const TreeMeasure& m, std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    forward_inplace(m, out);
    return out;
}

double forward_logdensity_inplace(const TreeMeasure& m, std::span<double> x) {
    // Downward walk: record the branch taken at each interior node and
    // accumulate the density factors, which depend only on the branch.
    const SplitNode* node = &m.tree.root;
    double log_den = 0.0;
    // Stack of (node, went_left) pairs; depth is bounded by the tree depth.
    static thread_local std::vector<const SplitNode*> nodes;
    static thread_local std::vector<char> went_left;
    nodes.clear();
    went_left.clear();
    while (!node->is_leaf()) {
        const bool go_left = x[node->split_dim] <= node->cut;
        const double mu_left = node->uniform_left();
        log_den += go_left
                       ? std::log(node->theta / mu_left)
                       : std::log((1.0 - node->theta) / (1.0 - mu_left));
        nodes.push_back(node);
        went_left.push_back(static_cast<char>(go_left));
        node = go_left ? node->left.get() : node->right.get();
    }
    // Fine-to-coarse application of the local moves along the fixed path.
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const SplitNode& n = *nodes[i];
        x[n.split_dim] =
            move_coord(n, x[n.split_dim], went_left[i] != 0);
    }
    return log_den;
}

void inverse_inplace(const TreeMeasure& m, std::span<double> u) {
    const SplitNode* node = &m.tree.root;
    while (!node->is_leaf()) {
        const InverseStep step = inverse_coord(node, u[node->split_dim]);
        u[node->split_dim] = step.value;
        node = step.went_left ? node->left.get() : node->right.get();
    }
}

std::vector<double> inverse(const TreeMeasure& m, std::span<const double> u) {
    std::vector<double> out(u.begin(), u.end());
    inverse_inplace(m, out);
    return out;
}

double log_density(const TreeMeasure& m, std::span<const double> x) {
    const SplitNode* node = &m.tree.root;
    double log_den = 0.0;
    while (!node->is_leaf()) {
        const bool go_left = x[node->split_dim] <= node->cut;
        const double mu_left = node->uniform_left();
        log_den += go_left
                       ? std::log(node->theta / mu_left)
                       : std::log((1.0 - node->theta) / (1.0 - mu_left));
        node = go_left ? node->left.get() : node->right.get();
    }
    return log_den;
}

}  // namespace treecdf

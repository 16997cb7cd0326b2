#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treecdf/matrix.hpp"
#include "treecdf/rng.hpp"

namespace treecdf {

// Affine map between original coordinates and the unit cube, recorded at
// training time. The training box is expanded by `margin` on both sides so
// test points slightly outside the observed range remain scorable.
struct PreprocessRecord {
    std::vector<double> col_min;
    std::vector<double> col_max;
    double margin = 0.01;
    std::vector<std::uint8_t> jitter_applied;

    // Expanded box: lo_j = min_j - margin * range_j, width_j = (1 + 2*margin)
    // * range_j. Cube coordinate u = (x - lo) / width.
    std::vector<double> lo;
    std::vector<double> width;
    double log_jacobian = 0.0;  // -sum_j log width_j

    int dim() const { return static_cast<int>(lo.size()); }

    // Maps x into the cube. Returns false when x lies outside the expanded
    // box; a coordinate mapping to exactly 0 is nudged to the smallest
    // representable positive value so it stays inside the half-open cube.
    bool to_cube(std::span<const double> x, std::span<double> out) const;
    void from_cube(std::span<const double> u, std::span<double> out) const;
};

// Min-max scaling of all columns into (0,1]. Throws DataError for constant
// or non-finite columns, naming the offending column.
std::pair<DataMatrix, PreprocessRecord> minmax_scale(const DataMatrix& data,
                                                     double margin);

// Breaks tied values by adding uniform noise supported between the midpoints
// toward the adjacent distinct values; untied values are untouched. Boundary
// ties draw one-sided noise toward the existing neighbor. Returns true when
// any value was perturbed. Throws DataError when all values are identical.
bool jitter_ties(std::vector<double>& column, Rng& rng);

// Column-wise jitter over a matrix; records which columns were perturbed.
std::vector<std::uint8_t> jitter_ties(DataMatrix& data, Rng& rng);

}  // namespace treecdf

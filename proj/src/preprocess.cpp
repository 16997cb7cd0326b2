#include "treecdf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "treecdf/errors.hpp"

namespace treecdf {

bool PreprocessRecord::to_cube(std::span<const double> x,
                               std::span<double> out) const {
    for (int j = 0; j < dim(); ++j) {
        double u = (x[j] - lo[j]) / width[j];
        if (u < 0.0 || u > 1.0) return false;
        if (u == 0.0) u = std::numeric_limits<double>::denorm_min();
        out[j] = u;
    }
    return true;
}

void PreprocessRecord::from_cube(std::span<const double> u,
                                 std::span<double> out) const {
    for (int j = 0; j < dim(); ++j) out[j] = lo[j] + u[j] * width[j];
}

std::pair<DataMatrix, PreprocessRecord> minmax_scale(const DataMatrix& data,
                                                     double margin) {
    if (data.rows < 2)
        throw DataError("minmax_scale: need at least two rows");
    if (margin < 0.0)
        throw DataError("minmax_scale: margin must be >= 0");
    PreprocessRecord rec;
    rec.margin = margin;
    rec.col_min.resize(data.cols);
    rec.col_max.resize(data.cols);
    rec.lo.resize(data.cols);
    rec.width.resize(data.cols);
    rec.jitter_applied.assign(data.cols, 0);
    for (std::size_t j = 0; j < data.cols; ++j) {
        double mn = data.at(0, j);
        double mx = mn;
        for (std::size_t i = 0; i < data.rows; ++i) {
            const double v = data.at(i, j);
            if (!std::isfinite(v))
                throw DataError("minmax_scale: non-finite value in column " +
                                std::to_string(j));
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        const double range = mx - mn;
        if (range <= 0.0)
            throw DataError("minmax_scale: column " + std::to_string(j) +
                            " is constant");
        rec.col_min[j] = mn;
        rec.col_max[j] = mx;
        rec.lo[j] = mn - margin * range;
        rec.width[j] = (1.0 + 2.0 * margin) * range;
        rec.log_jacobian -= std::log(rec.width[j]);
    }
    DataMatrix scaled(data.rows, data.cols);
    for (std::size_t i = 0; i < data.rows; ++i) {
        if (!rec.to_cube(data.row(i), scaled.row(i)))
            throw DataError("minmax_scale: training row escaped its own box");
    }
    return {std::move(scaled), std::move(rec)};
}

bool jitter_ties(std::vector<double>& column, Rng& rng) {
    std::vector<double> sorted(column);
    std::sort(sorted.begin(), sorted.end());
    // Distinct values with multiplicities, in increasing order.
    std::vector<double> distinct;
    std::vector<std::size_t> mult;
    for (double v : sorted) {
        if (distinct.empty() || v != distinct.back()) {
            distinct.push_back(v);
            mult.push_back(1);
        } else {
            ++mult.back();
        }
    }
    const bool has_tie =
        std::any_of(mult.begin(), mult.end(), [](std::size_t m) { return m > 1; });
    if (!has_tie) return false;
    if (distinct.size() == 1)
        throw DataError("jitter_ties: all values identical, no neighbors");

    // Noise support per tied value: between the midpoints toward the
    // adjacent distinct values; one-sided at the boundaries.
    std::map<double, std::pair<double, double>> support;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
        if (mult[k] < 2) continue;
        const double v = distinct[k];
        double lo = 0.0, hi = 0.0;
        if (k > 0) lo = -(v - distinct[k - 1]) / 2.0;
        if (k + 1 < distinct.size()) hi = (distinct[k + 1] - v) / 2.0;
        support.emplace(v, std::make_pair(lo, hi));
    }
    for (double& v : column) {
        const auto it = support.find(v);
        if (it == support.end()) continue;
        const auto [lo, hi] = it->second;
        v += lo + rng.next_unit_oo() * (hi - lo);
    }
    return true;
}

std::vector<std::uint8_t> jitter_ties(DataMatrix& data, Rng& rng) {
    std::vector<std::uint8_t> applied(data.cols, 0);
    std::vector<double> column(data.rows);
    for (std::size_t j = 0; j < data.cols; ++j) {
        for (std::size_t i = 0; i < data.rows; ++i) column[i] = data.at(i, j);
        try {
            applied[j] = jitter_ties(column, rng) ? 1 : 0;
        } catch (const DataError&) {
            throw DataError("jitter_ties: column " + std::to_string(j) +
                            " has all values identical");
        }
        if (applied[j])
            for (std::size_t i = 0; i < data.rows; ++i) data.at(i, j) = column[i];
    }
    return applied;
}

}  // namespace treecdf

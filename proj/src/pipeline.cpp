#include "treecdf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "treecdf/errors.hpp"
#include "treecdf/parallel.hpp"

namespace treecdf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Scenario A: Normal(mu, Sigma) with mu = (1/2, 1/2), sd 1/8, correlation
// 0.95, truncated to the cube by rejection. The density is evaluated without
// renormalization; the truncated mass is about 6e-5.
constexpr double kNormalSd = 0.125;
constexpr double kNormalRho = 0.95;

double normal_log_density(std::span<const double> x) {
    const double z1 = (x[0] - 0.5) / kNormalSd;
    const double z2 = (x[1] - 0.5) / kNormalSd;
    const double one_minus_r2 = 1.0 - kNormalRho * kNormalRho;
    const double quad =
        (z1 * z1 - 2.0 * kNormalRho * z1 * z2 + z2 * z2) / one_minus_r2;
    return -std::log(kTwoPi * kNormalSd * kNormalSd *
                     std::sqrt(one_minus_r2)) -
           0.5 * quad;
}

// Scenario B: Beta-product mixture with weights 1/10, 3/10, 3/10, 3/10.
struct BetaComponent {
    double weight;
    double a1, b1, a2, b2;
};

constexpr BetaComponent kBetaMix[] = {
    {0.1, 1.0, 1.0, 1.0, 1.0},
    {0.3, 15.0, 45.0, 15.0, 45.0},
    {0.3, 45.0, 15.0, 22.5, 37.5},
    {0.3, 37.5, 22.5, 45.0, 15.0},
};

double beta_log_pdf(double x, double a, double b) {
    if (!(x > 0.0 && x < 1.0)) {
        // Boundary values: finite only when the exponent vanishes there.
        if (x == 1.0 && b == 1.0)
            return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   (a - 1.0) * std::log(x);
        return kNegInf;
    }
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
           (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
}

double beta_mixture_log_density(std::span<const double> x) {
    double terms[4];
    double max_term = kNegInf;
    for (int i = 0; i < 4; ++i) {
        const auto& c = kBetaMix[i];
        terms[i] = std::log(c.weight) + beta_log_pdf(x[0], c.a1, c.b1) +
                   beta_log_pdf(x[1], c.a2, c.b2);
        max_term = std::max(max_term, terms[i]);
    }
    if (max_term == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - max_term);
    return max_term + std::log(sum);
}

// Scenario C: equal mixture of uniforms on three boxes. The boxes overlap,
// so the density at a point is the sum of 1/(3 vol) over the boxes holding
// it. Boxes are treated as half-open [a, b) so membership is unambiguous.
struct Box {
    double x_lo, x_hi, y_lo, y_hi;
    double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
    bool holds(std::span<const double> p) const {
        return p[0] >= x_lo && p[0] < x_hi && p[1] >= y_lo && p[1] < y_hi;
    }
};

constexpr Box kBoxes[] = {
    {0.1, 0.45, 0.35, 0.9},
    {0.2, 0.8, 0.45, 0.5},
    {0.7, 0.9, 0.05, 0.6},
};

double box_mixture_log_density(std::span<const double> x) {
    double density = 0.0;
    for (const Box& box : kBoxes)
        if (box.holds(x)) density += 1.0 / (3.0 * box.area());
    return density > 0.0 ? std::log(density) : kNegInf;
}

double gamma_draw(Rng& rng, double shape) {
    if (shape < 1.0)
        return gamma_draw(rng, shape + 1.0) *
               std::pow(rng.next_unit_oo(), 1.0 / shape);
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.next_normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_unit_oo();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double beta_draw(Rng& rng, double a, double b) {
    const double x = gamma_draw(rng, a);
    const double y = gamma_draw(rng, b);
    double v = x / (x + y);
    if (v <= 0.0) v = std::numeric_limits<double>::denorm_min();
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return v;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
    if (name == "A" || name == "a") return Scenario::A;
    if (name == "B" || name == "b") return Scenario::B;
    if (name == "C" || name == "c") return Scenario::C;
    throw DataError("unknown scenario '" + std::string(name) +
                    "' (expected A, B, or C)");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::A: return "A";
        case Scenario::B: return "B";
        default: return "C";
    }
}

std::size_t scenario_default_n(Scenario s) {
    switch (s) {
        case Scenario::A: return 1000;
        case Scenario::B: return 5000;
        default: return 2000;
    }
}

int scenario_dimension(Scenario) { return 2; }

double scenario_log_density(Scenario s, std::span<const double> x) {
    if (x.size() != 2)
        throw std::invalid_argument("scenario_log_density: expected 2D point");
    switch (s) {
        case Scenario::A: return normal_log_density(x);
        case Scenario::B: return beta_mixture_log_density(x);
        default: return box_mixture_log_density(x);
    }
}

DataMatrix scenario_sample(Scenario s, std::size_t n, Rng& rng) {
    DataMatrix out(n, 2);
    const double load = std::sqrt(1.0 - kNormalRho * kNormalRho);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = out.row(i);
        switch (s) {
            case Scenario::A: {
                for (;;) {
                    const double z1 = rng.next_normal();
                    const double z2 = rng.next_normal();
                    row[0] = 0.5 + kNormalSd * z1;
                    row[1] = 0.5 + kNormalSd * (kNormalRho * z1 + load * z2);
                    if (row[0] > 0.0 && row[0] <= 1.0 && row[1] > 0.0 &&
                        row[1] <= 1.0)
                        break;
                }
                break;
            }
            case Scenario::B: {
                const double u = rng.next_unit_co();
                int pick = 0;
                double cumulative = 0.0;
                for (int c = 0; c < 4; ++c) {
                    cumulative += kBetaMix[c].weight;
                    if (u < cumulative) {
                        pick = c;
                        break;
                    }
                }
                const auto& c = kBetaMix[pick];
                row[0] = beta_draw(rng, c.a1, c.b1);
                row[1] = beta_draw(rng, c.a2, c.b2);
                break;
            }
            default: {
                const Box& box = kBoxes[rng.next_index(3)];
                row[0] = box.x_lo + rng.next_unit_co() * (box.x_hi - box.x_lo);
                row[1] = box.y_lo + rng.next_unit_co() * (box.y_hi - box.y_lo);
                break;
            }
        }
    }
    return out;
}

CvResult cross_validate(const DataMatrix& cube_data,
                        std::span<const double> c0_grid,
                        std::span<const double> gamma_grid, int folds,
                        const FitConfig& base, double schedule_factor) {
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (c0_grid.empty() || gamma_grid.empty())
        throw std::invalid_argument("cross_validate: empty parameter grid");
    const std::size_t n = cube_data.rows;
    if (n < static_cast<std::size_t>(folds))
        throw DataError("cross_validate: fold with < 1 point rejected");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(base.seed, Stream::cv_shuffle);
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[shuffle_rng.next_index(i)]);

    const auto fold_range = [&](int f) {
        const std::size_t begin = n * static_cast<std::size_t>(f) /
                                  static_cast<std::size_t>(folds);
        const std::size_t end = n * static_cast<std::size_t>(f + 1) /
                                static_cast<std::size_t>(folds);
        return std::make_pair(begin, end);
    };

    const auto scaled = [&](int trees) {
        return static_cast<int>(
            std::llround(schedule_factor * static_cast<double>(trees)));
    };

    CvResult result;
    double best = -std::numeric_limits<double>::infinity();
    for (double c0 : c0_grid) {
        for (double gamma : gamma_grid) {
            CvEntry entry;
            entry.c0 = c0;
            entry.gamma = gamma;
            for (int f = 0; f < folds; ++f) {
                const auto [hold_begin, hold_end] = fold_range(f);
                const std::size_t hold = hold_end - hold_begin;
                DataMatrix train(n - hold, cube_data.cols);
                DataMatrix test(hold, cube_data.cols);
                std::size_t ti = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto src = cube_data.row(order[i]);
                    if (i >= hold_begin && i < hold_end) {
                        std::copy(src.begin(), src.end(),
                                  test.row(i - hold_begin).begin());
                    } else {
                        std::copy(src.begin(), src.end(), train.row(ti++).begin());
                    }
                }
                FitConfig config = base;
                config.c0 = c0;
                config.gamma = gamma;
                config.trees_per_margin = scaled(base.trees_per_margin);
                config.trees_copula = scaled(base.trees_copula);
                const Ensemble model = fit(train, config);
                double score = 0.0;
                for (std::size_t i = 0; i < test.rows; ++i)
                    score += log_density(model, test.row(i));
                entry.fold_scores.push_back(score /
                                            static_cast<double>(test.rows));
            }
            entry.mean_score = std::accumulate(entry.fold_scores.begin(),
                                               entry.fold_scores.end(), 0.0) /
                               static_cast<double>(folds);
            if (entry.mean_score > best) {
                best = entry.mean_score;
                result.c0 = c0;
                result.gamma = gamma;
            }
            result.table.push_back(std::move(entry));
        }
    }
    return result;
}

KlEstimate estimate_kl(
    const std::function<double(std::span<const double>)>& true_logpdf,
    const std::function<DataMatrix(std::size_t, Rng&)>& sampler,
    const Ensemble& model, std::size_t mc_count, Rng& rng,
    bool original_scale) {
    if (mc_count < 1000)
        throw std::invalid_argument("estimate_kl: mc_count must be >= 1000");
    const DataMatrix draws = sampler(mc_count, rng);
    std::vector<double> diffs(draws.rows);
    std::vector<std::uint8_t> valid(draws.rows, 0);
    parallel_for(draws.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double model_ld =
                log_density(model, draws.row(i), original_scale);
            if (std::isinf(model_ld)) continue;
            diffs[i] = true_logpdf(draws.row(i)) - model_ld;
            valid[i] = 1;
        }
    });
    KlEstimate est;
    double sum = 0.0;
    for (std::size_t i = 0; i < draws.rows; ++i) {
        if (!valid[i]) {
            ++est.excluded;
            continue;
        }
        sum += diffs[i];
        ++est.used;
    }
    if (est.used == 0) throw DataError("estimate_kl: no usable points");
    est.kl = sum / static_cast<double>(est.used);
    double ss = 0.0;
    for (std::size_t i = 0; i < draws.rows; ++i)
        if (valid[i]) ss += (diffs[i] - est.kl) * (diffs[i] - est.kl);
    est.se = est.used > 1 ? std::sqrt(ss / (static_cast<double>(est.used) *
                                            (static_cast<double>(est.used) - 1)))
                          : 0.0;
    return est;
}

PredictiveScore predictive_score(const Ensemble& model, const DataMatrix& test,
                                 bool original_scale) {
    if (test.rows == 0) throw DataError("predictive_score: empty test set");
    std::vector<double> scores(test.rows);
    std::vector<std::uint8_t> valid(test.rows, 0);
    parallel_for(test.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double ld = log_density(model, test.row(i), original_scale);
            if (std::isinf(ld)) continue;
            scores[i] = ld;
            valid[i] = 1;
        }
    });
    PredictiveScore result;
    double sum = 0.0;
    for (std::size_t i = 0; i < test.rows; ++i) {
        if (!valid[i]) {
            ++result.outside;
            continue;
        }
        sum += scores[i];
        ++result.used;
    }
    if (result.used == 0)
        throw DataError("predictive_score: every test row fell outside the box");
    result.mean = sum / static_cast<double>(result.used);
    double ss = 0.0;
    for (std::size_t i = 0; i < test.rows; ++i)
        if (valid[i]) ss += (scores[i] - result.mean) * (scores[i] - result.mean);
    result.sd = result.used > 1
                    ? std::sqrt(ss / (static_cast<double>(result.used) - 1))
                    : 0.0;
    return result;
}

}  // namespace treecdf

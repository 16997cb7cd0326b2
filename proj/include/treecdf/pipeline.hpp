#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treecdf/boosting.hpp"
#include "treecdf/matrix.hpp"
#include "treecdf/rng.hpp"

namespace treecdf {

// Two-dimensional synthetic scenarios: a highly correlated truncated normal
// (A), a four-component Beta-product mixture (B), and an equal mixture of
// three uniform boxes (C).
enum class Scenario { A, B, C };

Scenario parse_scenario(std::string_view name);
std::string scenario_name(Scenario s);
std::size_t scenario_default_n(Scenario s);
int scenario_dimension(Scenario s);

double scenario_log_density(Scenario s, std::span<const double> x);
DataMatrix scenario_sample(Scenario s, std::size_t n, Rng& rng);

struct CvEntry {
    double c0 = 0.0;
    double gamma = 0.0;
    double mean_score = 0.0;
    std::vector<double> fold_scores;
};

struct CvResult {
    double c0 = 0.0;
    double gamma = 0.0;
    std::vector<CvEntry> table;
};

// Grid search over (c0, gamma) by k-fold cross validation on cube-scale
// data. Folds are contiguous blocks of a seeded shuffle; each fold model
// runs the configured schedule scaled by schedule_factor. Ties break toward
// the smaller c0, then the smaller gamma.
CvResult cross_validate(const DataMatrix& cube_data,
                        std::span<const double> c0_grid,
                        std::span<const double> gamma_grid, int folds,
                        const FitConfig& base, double schedule_factor = 1.0);

struct KlEstimate {
    double kl = 0.0;
    double se = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;  // points where the model density was zero
};

// Monte-Carlo divergence estimate: mean of true_logpdf(X) - model log-density
// at X, with X drawn from the true sampler. Points with -infinity model
// density are excluded and counted.
KlEstimate estimate_kl(
    const std::function<double(std::span<const double>)>& true_logpdf,
    const std::function<DataMatrix(std::size_t, Rng&)>& sampler,
    const Ensemble& model, std::size_t mc_count, Rng& rng,
    bool original_scale = false);

struct PredictiveScore {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t used = 0;
    std::size_t outside = 0;  // test rows outside the preprocessing box
};

// Mean and standard deviation of the model log-density over test rows.
PredictiveScore predictive_score(const Ensemble& model, const DataMatrix& test,
                                 bool original_scale);

}  // namespace treecdf

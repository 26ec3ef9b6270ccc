#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/erm.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

/**
 * Monte-Carlo bias^2 / variance / noise split of the average expected square
 * loss. `sum` is bias_sq + variance + noise exactly; `aesl_direct` is an
 * independent estimate of the same quantity from fresh (train set, x, y)
 * triples, so |aesl_direct - sum| is a testable statistical identity.
 */
struct BVDecomposition {
    double bias_sq = 0.0;
    double variance = 0.0;
    double noise = 0.0;       // analytic: sigma^2 (regression), 4q(1-q) (+-1 labels)
    double sum = 0.0;
    double aesl_direct = 0.0;
    double aesl_stderr = 0.0;
    double sum_stderr = 0.0;   // block stderr of bias_sq + variance
    int n_train_sets = 0;
    int n_eval_points = 0;
};

BVDecomposition bias_variance_noise(const HypothesisClass& F, const Generator& gen, int n,
                                    double lambda, const TrainerConfig& cfg, int n_train_sets,
                                    int n_eval_points, std::uint64_t seed);

/// Decomposition per lambda with common random numbers: the same train sets,
/// eval points, and fresh triples are reused across the whole grid.
std::vector<std::pair<double, BVDecomposition>> aesl_sweep(const HypothesisClass& F,
                                                           const Generator& gen, int n,
                                                           const std::vector<double>& lambda_grid,
                                                           const TrainerConfig& cfg,
                                                           int n_train_sets, int n_eval_points,
                                                           std::uint64_t seed);

}  // namespace genlab

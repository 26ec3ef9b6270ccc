#pragma once

#include <cstdint>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/erm.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

struct CVResult {
    std::vector<double> lambda_grid;     // ascending
    Eigen::MatrixXd per_fold_errors;     // r x |grid|, held-out test errors
    std::vector<double> ahat_el;         // fold-mean of per_fold_errors per lambda
    std::vector<double> train_errors;    // whole-set train error per lambda
    double lambda_hat = 0.0;
    int r = 0;
};

/**
 * r-fold cross-validated estimate of the average expected loss over a lambda
 * grid. For each fold j and lambda: fit on the fold's complement, evaluate on
 * the held-out fold; aggregate by fold mean. r = 1 degenerates to a single
 * holdout split with the given test fraction.
 *
 * A fold split may be injected (testing hook); by default it is derived
 * from the seed.
 */
CVResult cv_sweep(const Dataset& ds, const HypothesisClass& F, const LossFn& fn,
                  const std::vector<double>& lambda_grid, int r, const TrainerConfig& cfg,
                  std::uint64_t seed, double holdout_fraction = 0.25,
                  const FoldSplit* injected_split = nullptr);

/// Argmin of ahat_el over the grid; ties break toward the largest lambda.
double select_lambda(const CVResult& res);

/// Logarithmically spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_lambda_grid(double lo, double hi, int points = 12);

}  // namespace genlab

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

struct EarlyStopping {
    double validation_fraction = 0.2;   // in (0, 1)
    int patience = 10;
};

struct TrainerConfig {
    int max_epochs = 1000;
    double learning_rate = 0.1;
    int batch_size = 0;   // 0 = full batch
    int restarts = 1;
    double init_scale = 0.0;   // 0 = per-layer default 1/sqrt(fan_in)
    std::optional<EarlyStopping> early_stopping;
    double tolerance = 1e-10;   // stop when per-epoch objective improvement falls below
    std::uint64_t seed = 0;
};

struct TracePoint {
    int epoch = 0;
    double train_objective = 0.0;
    double validation_error = 0.0;   // NaN when early stopping is off
};

struct FitResult {
    Hypothesis hypothesis;
    double final_objective = 0.0;   // minimum over restarts
    int epochs_run = 0;
    int restart_index = 0;
    bool stopped_early = false;
    std::vector<TracePoint> trace;   // winning restart's per-epoch trace (gd fits)
};

/// (1/n) sum_i loss(y_i, f(x_i)).
double empirical_error(const Hypothesis& f, const Dataset& S, const LossFn& fn);

/**
 * Expected loss of f under the generator's distribution: (estimate, stderr).
 * Exact shortcuts (stderr 0): linear f + linear-gaussian gen + square loss;
 * bias-free sign-thresholded linear f + linear-threshold gen + zero-one loss.
 * Otherwise a Monte-Carlo estimate from m fresh draws.
 */
std::pair<double, double> population_error(const Hypothesis& f, const Generator& gen,
                                           const LossFn& fn, int m, std::uint64_t seed);

/// empirical_error + lambda * penalty(w); order 2 penalty is ||w||_2^2,
/// order 1 is ||w||_1. Biases are excluded from the penalty.
double regularized_objective(const Hypothesis& f, const Dataset& S, const LossFn& fn,
                             double lambda, int norm_order);

/**
 * Regularized empirical risk minimization over the class:
 *  - ridge-linear + square loss: closed form w = (X'X + n*lambda*I)^-1 X'y
 *  - lasso-linear + square loss: cyclic coordinate descent
 *  - mlp: (mini-)batch gradient descent via backprop, best of `restarts`
 *  - finite: exact argmin of the empirical error (ties to the lowest index)
 */
FitResult fit(const HypothesisClass& F, const Dataset& S, const LossFn& fn, double lambda,
              const TrainerConfig& cfg);

struct CorrespondenceRow {
    double c = 0.0;        // constraint radius exhibited by lambda: ||w(lambda)||
    double lambda = 0.0;
    double weight_norm = 0.0;
};

/// Ridge constraint <-> penalty correspondence: ||w(lambda)|| per grid point
/// (nonincreasing in lambda).
std::vector<CorrespondenceRow> constraint_lambda_correspondence(
    const HypothesisClass& F, const Dataset& S, const LossFn& fn,
    const std::vector<double>& lambda_grid);

}  // namespace genlab

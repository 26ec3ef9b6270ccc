#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genlab/bounds.hpp"
#include "genlab/complexity.hpp"
#include "genlab/datagen.hpp"
#include "genlab/erm.hpp"

namespace genlab {

enum class ConditionTag { TrueLabels, RandomLabels, RandomFeatures, RandomBoth };

const char* condition_name(ConditionTag tag);

struct ConditionRow {
    ConditionTag tag = ConditionTag::TrueLabels;
    double train_error = 0.0;      // zero-one
    double test_error = 0.0;       // zero-one on fresh draws
    int epochs = 0;
    long long param_count = 0;
    int n = 0;
    double k_over_n = 0.0;
};

struct FactThresholds {
    double fact1_rad_min = 0.95;         // "complexity very close to 1"
    double fact2_test_error_max = 0.15;  // "generalize very well"
};

struct RandomizationReport {
    std::vector<ConditionRow> rows;              // lambda = 0, no early stopping
    std::vector<ConditionRow> regularized_rows;  // comparison: L2 penalty + early stopping
    ComplexityEstimate rad_estimate;             // fit-based, on the true-feature sample
    BoundReport bound;                           // classification bound, true-label condition
    FactThresholds thresholds;
    bool fact1_fired = false;
    bool fact2_fired = false;
    bool conclusion_fired = false;   // fact1 && fact2 && vacuous bound
};

/**
 * Randomization suite in the overparameterized regime (param count > n):
 * train the class on true / random-label / random-feature / random-both
 * variants of one sample with no explicit regularization, estimate the
 * class's empirical Rademacher complexity on the same sample, evaluate the
 * classification bound, and set the three fact flags.
 */
RandomizationReport run_randomization_suite(const HypothesisClass& F, const Generator& gen, int n,
                                            const TrainerConfig& cfg, double delta,
                                            std::uint64_t seed, int n_sigma = 64,
                                            int test_n = 2048, double reg_lambda = 1e-3);

/// Zero-one train error on one fixed random-label dataset per class, ordered
/// by capacity; exhibits the transition to memorization as k/n grows.
std::vector<std::pair<long long, double>> memorization_curve(
    const std::vector<HypothesisClass>& family, const Generator& gen, int n,
    const TrainerConfig& cfg, std::uint64_t seed);

}  // namespace genlab

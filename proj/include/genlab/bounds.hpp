#pragma once

#include <cstdint>

#include "genlab/datagen.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

enum class BoundVariant {
    General,          // err_P <= emp + 2*Rad(H) + 3*sqrt(ln(2/delta)/n)
    Classification,   // err_P <= emp + Rad(F)   + 3*sqrt(ln(2/delta)/n)
};

struct BoundReport {
    double empirical_error = 0.0;
    double complexity_term = 0.0;   // 2*rad (general) or rad (classification)
    double confidence_term = 0.0;   // 3*sqrt(ln(2/delta)/n)
    double total_bound = 0.0;       // sum of the three, exactly
    double delta = 0.0;
    long long n = 0;
    BoundVariant variant = BoundVariant::Classification;
    bool vacuous = false;   // zero-one loss: total_bound >= 1 carries no information
};

/// Evaluate the high-probability generalization bound. For the general
/// variant rad is read as Rad(H); for the classification variant as Rad(F).
BoundReport generalization_bound(double empirical_error, double rad, long long n, double delta,
                                 BoundVariant variant);

/**
 * Empirical coverage of the classification bound: over `trials` fresh
 * datasets, fit by ERM (zero-one loss), then check that the population error
 * stays below the bound computed from the sample. Monte-Carlo error in the
 * population-error estimate is folded into the pass margin.
 */
double bound_coverage(const HypothesisClass& F, const Generator& gen, int n, double delta,
                      int trials, std::uint64_t seed);

}  // namespace genlab

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genlab/datagen.hpp"
#include "genlab/erm.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

/// A prescribed binary sequence sigma in {-1,+1}^n.
struct SignVector {
    Eigen::VectorXd s;

    explicit SignVector(Eigen::VectorXd v);
    Eigen::Index size() const { return s.size(); }
};

/// Uniform random sign vector of length n.
SignVector random_signs(Eigen::Index n, std::uint64_t seed, std::uint64_t index = 0);

enum class ComplexityMethod { ExactEnumeration, MonteCarlo };
enum class SupSolver { Enumeration, FitBased };

struct SupDiagnostics {
    SupSolver solver = SupSolver::Enumeration;
    int restarts_used = 0;     // fit-based only
    int best_member = -1;      // enumeration only
    bool exact = true;         // false for fit-based lower bounds
};

struct ComplexityEstimate {
    double value = 0.0;
    double stderr_ = 0.0;   // 0 for exact enumeration
    ComplexityMethod method = ComplexityMethod::ExactEnumeration;
    std::uint64_t n_sigma = 0;
    SupSolver sup_solver = SupSolver::Enumeration;
    int restarts = 0;
    std::vector<double> per_sigma;   // achieved correlations (MC diagnostics)
};

/// Largest n for which exact 2^n sigma enumeration is allowed.
inline constexpr int kExactSigmaCap = 20;
/// Largest candidate-point count accepted by the shattering search.
inline constexpr int kVcCandidateCap = 25;

/**
 * Highest correlation (1/n) sum_i sigma_i h(z_i) achievable over the class.
 * Exact for finite classes (max over members). For sign-output parametric
 * classes (linear-threshold, mlp) the square-loss surrogate is trained
 * against sigma as targets, best of cfg.restarts; the result is a lower
 * bound on the true sup.
 */
std::pair<double, SupDiagnostics> sup_correlation(const HypothesisClass& F, const Dataset& S,
                                                  const SignVector& sigma,
                                                  const TrainerConfig& cfg);

/// Exact empirical Rademacher complexity by full 2^n sigma enumeration
/// (finite classes, n <= kExactSigmaCap).
ComplexityEstimate rademacher_exact(const HypothesisClass& F, const Dataset& S);

/// Monte-Carlo empirical Rademacher complexity over n_sigma uniform sign
/// vectors, with the standard error of the mean.
ComplexityEstimate rademacher_mc(const HypothesisClass& F, const Dataset& S, int n_sigma,
                                 const TrainerConfig& cfg, std::uint64_t seed);

/// Population Rademacher complexity: rademacher_mc averaged over n_samples
/// fresh datasets of size n; the stderr combines both levels.
ComplexityEstimate rademacher_population(const HypothesisClass& F, const Generator& gen, int n,
                                         int n_samples, int n_sigma, const TrainerConfig& cfg,
                                         std::uint64_t seed);

/// (Rad(aF + b), |a| * Rad(F)), both by exact enumeration. Equal by the
/// affine scaling property.
std::pair<double, double> affine_class_complexity(const HypothesisClass& F, double a, double b,
                                                  const Dataset& S);

/// The half-factor reduction Rad(H) = Rad(F)/2 for the zero-one loss class.
double loss_class_complexity(double rad_f);

/// Direct check: exact Rademacher complexity of the explicit loss class
/// {(x, sigma) -> (1 - sigma f(x))/2 : f in F} on the labeled sample.
double loss_class_complexity_direct(const HypothesisClass& F, const Dataset& S);

/**
 * VC dimension over the candidate point set: the largest d <= d_max such
 * that some d-subset is shattered (all 2^d dichotomies realized). Finite
 * classes check realized sign patterns; linear thresholds use the exact
 * rank characterization (a point set is shattered by homogeneous linear
 * thresholds iff the augmented points are linearly independent). Supersets
 * of unshattered sets are pruned.
 */
int vc_dimension(const HypothesisClass& F, const std::vector<Eigen::VectorXd>& candidates,
                 int d_max);

/// The VC bound sqrt(2 d ln n / n) on the empirical Rademacher complexity.
double vc_rad_bound(int d, long long n);

}  // namespace genlab

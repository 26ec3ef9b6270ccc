#include "genlab/bounds.hpp"

#include <cmath>

#include "genlab/complexity.hpp"
#include "genlab/erm.hpp"
#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"

namespace genlab {

BoundReport generalization_bound(double empirical_error, double rad, long long n, double delta,
                                 BoundVariant variant) {
    if (delta <= 0.0 || delta >= 1.0)
        throw InputError("generalization_bound: delta must lie in (0,1)");
    if (n < 1) throw InputError("generalization_bound: need n >= 1");
    if (rad < 0.0) throw InputError("generalization_bound: rad must be nonnegative");

    BoundReport report;
    report.empirical_error = empirical_error;
    report.complexity_term = variant == BoundVariant::General ? 2.0 * rad : rad;
    report.confidence_term = 3.0 * std::sqrt(std::log(2.0 / delta) / double(n));
    report.total_bound = report.empirical_error + report.complexity_term + report.confidence_term;
    report.delta = delta;
    report.n = n;
    report.variant = variant;
    report.vacuous = report.total_bound >= 1.0;
    return report;
}

double bound_coverage(const HypothesisClass& F, const Generator& gen, int n, double delta,
                      int trials, std::uint64_t seed) {
    if (F.kind != ClassKind::Finite)
        throw UnsupportedError("bound_coverage: finite classes only (exact rad and argmin)");
    if (trials < 100) throw InputError("bound_coverage: need trials >= 100");
    if (!gen.is_classification())
        throw UnsupportedError("bound_coverage: classification generators only");

    const LossFn zo = zero_one_loss();
    std::vector<char> covered(static_cast<std::size_t>(trials), 0);
    parallel_for(covered.size(), [&](std::size_t t) {
        const std::uint64_t trial_seed = mix64(seed ^ fnv1a64("coverage-trial")) + t;
        const Dataset S = generate(gen, n, trial_seed);
        const FitResult res = fit(F, S, zo, 0.0, {});
        const double rad = rademacher_exact(F, S).value;
        const BoundReport report = generalization_bound(res.final_objective, rad, n, delta,
                                                        BoundVariant::Classification);
        const auto [err_p, stderr_p] =
            population_error(res.hypothesis, gen, zo, 100000, mix64(trial_seed));
        covered[t] = err_p <= report.total_bound + 3.0 * stderr_p ? 1 : 0;
    });

    int hits = 0;
    for (const char c : covered) hits += c;
    return double(hits) / double(trials);
}

}  // namespace genlab

#include "genlab/experiments.hpp"

#include <cmath>

#include "genlab/errors.hpp"
#include "genlab/rng.hpp"

namespace genlab {

const char* condition_name(ConditionTag tag) {
    switch (tag) {
        case ConditionTag::TrueLabels: return "true-labels";
        case ConditionTag::RandomLabels: return "random-labels";
        case ConditionTag::RandomFeatures: return "random-features";
        case ConditionTag::RandomBoth: return "random-both";
    }
    return "?";
}

namespace {

// The tag names the transform chain; train and test sets both pass through
// it (with independent streams), so each condition is a distribution of its
// own. Under random labels the test labels are independent of everything the
// model saw, which pins the expected test error at exactly 1/2.
Dataset apply_condition(const Dataset& base, ConditionTag tag, std::uint64_t seed) {
    switch (tag) {
        case ConditionTag::TrueLabels:
            return base;
        case ConditionTag::RandomLabels:
            return randomize_labels(base, mix64(seed ^ fnv1a64("cond-labels")));
        case ConditionTag::RandomFeatures:
            return randomize_features(base, mix64(seed ^ fnv1a64("cond-features")));
        case ConditionTag::RandomBoth:
            return randomize_labels(
                randomize_features(base, mix64(seed ^ fnv1a64("cond-features"))),
                mix64(seed ^ fnv1a64("cond-labels")));
    }
    throw ConfigError("apply_condition: unknown tag");
}

ConditionRow run_condition(const HypothesisClass& F, const Dataset& train, const Dataset& test,
                           ConditionTag tag, double lambda, const TrainerConfig& cfg) {
    const LossFn zo = zero_one_loss();
    const FitResult res = fit(F, train, zo, lambda, cfg);
    ConditionRow row;
    row.tag = tag;
    row.train_error = empirical_error(res.hypothesis, train, zo);
    row.test_error = empirical_error(res.hypothesis, test, zo);
    row.epochs = res.epochs_run;
    row.param_count = param_count(F);
    row.n = static_cast<int>(train.size());
    row.k_over_n = double(row.param_count) / double(row.n);
    return row;
}

}  // namespace

RandomizationReport run_randomization_suite(const HypothesisClass& F, const Generator& gen, int n,
                                            const TrainerConfig& cfg, double delta,
                                            std::uint64_t seed, int n_sigma, int test_n,
                                            double reg_lambda) {
    if (!gen.is_classification())
        throw ConfigError("randomization suite: classification generator required");
    const long long k = param_count(F);
    if (k <= n)
        throw GuardError("randomization suite: overparameterized regime required "
                         "(param count k = " + std::to_string(k) +
                         " must exceed n = " + std::to_string(n) + ")");

    const Dataset base = generate(gen, n, mix64(seed ^ fnv1a64("suite-train")));
    const Dataset test = generate(gen, test_n, mix64(seed ^ fnv1a64("suite-test")));

    const ConditionTag tags[] = {ConditionTag::TrueLabels, ConditionTag::RandomLabels,
                                 ConditionTag::RandomFeatures, ConditionTag::RandomBoth};

    RandomizationReport report;
    for (const ConditionTag tag : tags) {
        const Dataset train = apply_condition(base, tag, seed);
        const Dataset cond_test = apply_condition(test, tag, mix64(seed ^ fnv1a64("test-side")));
        TrainerConfig sub = cfg;
        sub.seed = mix64(seed ^ fnv1a64(condition_name(tag)));
        // Headline rows: lambda = 0, no early stopping.
        sub.early_stopping.reset();
        report.rows.push_back(run_condition(F, train, cond_test, tag, 0.0, sub));

        // Comparison rows: L2 penalty plus early stopping switched on.
        TrainerConfig reg = sub;
        reg.seed = mix64(sub.seed ^ fnv1a64("regularized"));
        if (!reg.early_stopping) reg.early_stopping = EarlyStopping{0.2, 20};
        report.regularized_rows.push_back(run_condition(F, train, cond_test, tag, reg_lambda, reg));
    }

    report.rad_estimate =
        rademacher_mc(F, base, n_sigma, cfg, mix64(seed ^ fnv1a64("suite-rad")));

    const ConditionRow& true_row = report.rows.front();
    report.bound = generalization_bound(true_row.train_error, report.rad_estimate.value, n, delta,
                                        BoundVariant::Classification);

    report.fact1_fired = report.rad_estimate.value >= report.thresholds.fact1_rad_min;
    report.fact2_fired = true_row.test_error <= report.thresholds.fact2_test_error_max;
    report.conclusion_fired = report.fact1_fired && report.fact2_fired && report.bound.vacuous;
    return report;
}

std::vector<std::pair<long long, double>> memorization_curve(
    const std::vector<HypothesisClass>& family, const Generator& gen, int n,
    const TrainerConfig& cfg, std::uint64_t seed) {
    if (family.empty()) throw InputError("memorization_curve: empty class family");
    if (!gen.is_classification())
        throw ConfigError("memorization_curve: classification generator required");

    const Dataset base = generate(gen, n, mix64(seed ^ fnv1a64("curve-data")));
    const Dataset random = randomize_labels(base, mix64(seed ^ fnv1a64("curve-labels")));
    const LossFn zo = zero_one_loss();

    std::vector<std::pair<long long, double>> table;
    table.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        TrainerConfig sub = cfg;
        sub.seed = mix64(seed ^ fnv1a64("curve-fit")) + i;
        const FitResult res = fit(family[i], random, zo, 0.0, sub);
        table.emplace_back(param_count(family[i]),
                           empirical_error(res.hypothesis, random, zo));
    }
    return table;
}

}  // namespace genlab

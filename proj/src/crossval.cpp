#include "genlab/crossval.hpp"

#include <cmath>
#include <numeric>

#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"

namespace genlab {

CVResult cv_sweep(const Dataset& ds, const HypothesisClass& F, const LossFn& fn,
                  const std::vector<double>& lambda_grid, int r, const TrainerConfig& cfg,
                  std::uint64_t seed, double holdout_fraction, const FoldSplit* injected_split) {
    if (lambda_grid.empty()) throw InputError("cv_sweep: empty lambda grid");
    for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] < lambda_grid[i + 1]))
            throw InputError("cv_sweep: lambda grid must be strictly ascending");
    const int n = static_cast<int>(ds.size());
    if (r < 1) throw ConfigError("cv_sweep: need r >= 1");
    if (r > n) throw ConfigError("cv_sweep: more folds than samples");

    // Test/train index pairs per fold. r = 1 is a single holdout split.
    std::vector<std::vector<int>> test_sets, train_sets;
    if (r == 1) {
        if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
            throw ConfigError("cv_sweep: holdout fraction must lie in (0,1)");
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        Rng rng = Rng::stream(seed, "holdout-shuffle");
        rng.shuffle(order);
        const int n_test = std::max(1, static_cast<int>(std::floor(holdout_fraction * n)));
        if (n_test >= n) throw ConfigError("cv_sweep: holdout leaves no train data");
        test_sets.push_back({order.begin(), order.begin() + n_test});
        train_sets.push_back({order.begin() + n_test, order.end()});
    } else {
        const FoldSplit split = injected_split ? *injected_split : split_folds(n, r, seed);
        for (int j = 0; j < r; ++j) {
            test_sets.push_back(split.fold_indices()[static_cast<std::size_t>(j)]);
            train_sets.push_back(split.complement_indices(j));
        }
    }

    const int L = static_cast<int>(lambda_grid.size());
    CVResult res;
    res.lambda_grid = lambda_grid;
    res.r = r;
    res.per_fold_errors.resize(r, L);
    res.train_errors.assign(static_cast<std::size_t>(L), 0.0);

    // (fold, lambda) fits are independent; merged by index.
    parallel_for(static_cast<std::size_t>(r) * static_cast<std::size_t>(L), [&](std::size_t task) {
        const int j = static_cast<int>(task / static_cast<std::size_t>(L));
        const int l = static_cast<int>(task % static_cast<std::size_t>(L));
        const Dataset Sj = subset(ds, train_sets[static_cast<std::size_t>(j)]);
        const Dataset Tj = subset(ds, test_sets[static_cast<std::size_t>(j)]);
        TrainerConfig sub = cfg;
        sub.seed = mix64(cfg.seed ^ fnv1a64("cv-fit")) + task;
        const FitResult fitres = fit(F, Sj, fn, lambda_grid[static_cast<std::size_t>(l)], sub);
        res.per_fold_errors(j, l) = empirical_error(fitres.hypothesis, Tj, fn);
    });

    std::vector<double> whole(static_cast<std::size_t>(L), 0.0);
    parallel_for(static_cast<std::size_t>(L), [&](std::size_t l) {
        TrainerConfig sub = cfg;
        sub.seed = mix64(cfg.seed ^ fnv1a64("cv-whole")) + l;
        const FitResult fitres = fit(F, ds, fn, lambda_grid[l], sub);
        whole[l] = empirical_error(fitres.hypothesis, ds, fn);
    });
    res.train_errors = whole;

    res.ahat_el.assign(static_cast<std::size_t>(L), 0.0);
    for (int l = 0; l < L; ++l)
        res.ahat_el[static_cast<std::size_t>(l)] = res.per_fold_errors.col(l).mean();

    res.lambda_hat = select_lambda(res);
    return res;
}

double select_lambda(const CVResult& res) {
    if (res.ahat_el.empty() || res.ahat_el.size() != res.lambda_grid.size())
        throw InputError("select_lambda: invalid CV result");
    std::size_t best = 0;
    for (std::size_t l = 1; l < res.ahat_el.size(); ++l)
        if (res.ahat_el[l] <= res.ahat_el[best]) best = l;   // ties toward larger lambda
    return res.lambda_grid[best];
}

std::vector<double> log_lambda_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw ConfigError("log_lambda_grid: need 0 < lo < hi and points >= 2");
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (std::log(hi) - std::log(lo)) / double(points - 1);
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
    grid.back() = hi;
    return grid;
}

}  // namespace genlab

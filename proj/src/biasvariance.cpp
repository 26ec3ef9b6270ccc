#include "genlab/biasvariance.hpp"

#include <cmath>

#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"

namespace genlab {

namespace {

double analytic_noise(const Generator& gen) {
    switch (gen.kind) {
        case GeneratorKind::LinearGaussianRegression:
            return gen.noise_sigma * gen.noise_sigma;
        case GeneratorKind::LinearThresholdClassification: {
            // E[(y - h(x))^2 | x] = 1 - (1-2q)^2 = 4q(1-q), constant in x.
            const double q = gen.label_flip_prob;
            return 4.0 * q * (1.0 - q);
        }
        case GeneratorKind::GridImageClassification:
            throw UnsupportedError(
                "bias_variance_noise: grid-image conditional variance is not constant; "
                "use linear-gaussian or linear-threshold generators");
    }
    throw ConfigError("bias_variance_noise: unknown generator kind");
}

constexpr int kDirectDrawsPerSet = 4;

struct BvInputs {
    std::vector<Dataset> train_sets;
    std::vector<Dataset> fresh_sets;        // for the direct AESL estimate
    std::vector<Dataset> fresh_pairs;       // kDirectDrawsPerSet fresh (x, y) per fresh set
    Eigen::MatrixXd X_eval;                 // n_eval x p
    Eigen::VectorXd h_eval;                 // conditional mean on eval points
};

BvInputs draw_inputs(const Generator& gen, int n, int n_train_sets, int n_eval_points,
                     std::uint64_t seed) {
    BvInputs in;
    in.train_sets.resize(static_cast<std::size_t>(n_train_sets));
    in.fresh_sets.resize(static_cast<std::size_t>(n_train_sets));
    in.fresh_pairs.resize(static_cast<std::size_t>(n_train_sets));
    parallel_for(in.train_sets.size(), [&](std::size_t t) {
        in.train_sets[t] = generate(gen, n, mix64(seed ^ fnv1a64("bv-train")) + t);
        in.fresh_sets[t] = generate(gen, n, mix64(seed ^ fnv1a64("bv-fresh")) + t);
        in.fresh_pairs[t] =
            generate(gen, kDirectDrawsPerSet, mix64(seed ^ fnv1a64("bv-pair")) + t);
    });
    const Dataset eval = generate(gen, n_eval_points, mix64(seed ^ fnv1a64("bv-eval")));
    in.X_eval = eval.X;
    in.h_eval.resize(n_eval_points);
    for (int e = 0; e < n_eval_points; ++e)
        in.h_eval(e) = conditional_mean(gen, in.X_eval.row(e).transpose());
    return in;
}

// Closed-form ridge caches so a lambda sweep reuses each train set's Gram.
struct RidgeCache {
    Eigen::MatrixXd XtX;
    Eigen::VectorXd Xty;
    Eigen::RowVectorXd x_mean;
    double y_mean = 0.0;
    double n = 0.0;
};

RidgeCache ridge_cache(const Dataset& S, bool with_bias) {
    RidgeCache c;
    c.n = double(S.size());
    if (with_bias) {
        c.x_mean = S.X.colwise().mean();
        c.y_mean = S.y.mean();
        const Eigen::MatrixXd Xc = S.X.rowwise() - c.x_mean;
        const Eigen::VectorXd yc = S.y.array() - c.y_mean;
        c.XtX = Xc.transpose() * Xc;
        c.Xty = Xc.transpose() * yc;
    } else {
        c.x_mean = Eigen::RowVectorXd::Zero(S.feature_dim());
        c.XtX = S.X.transpose() * S.X;
        c.Xty = S.X.transpose() * S.y;
    }
    return c;
}

Hypothesis ridge_solve(const RidgeCache& c, double lambda, bool with_bias) {
    Eigen::MatrixXd A = c.XtX;
    A.diagonal().array() += c.n * lambda;
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericError("bias_variance: degenerate ridge solve at lambda = 0");
    const Eigen::VectorXd w = llt.solve(c.Xty);
    return with_bias ? make_linear_with_bias(w, c.y_mean - c.x_mean * w) : make_linear(w);
}

BVDecomposition decompose_one(const HypothesisClass& F, const Generator& gen, double lambda,
                              const TrainerConfig& cfg, const BvInputs& in,
                              const std::vector<RidgeCache>* train_caches,
                              const std::vector<RidgeCache>* fresh_caches) {
    const int T = static_cast<int>(in.train_sets.size());
    const int E = static_cast<int>(in.X_eval.rows());
    const LossFn sq = square_loss();

    auto fit_on = [&](const Dataset& S, const RidgeCache* cache) {
        if (cache) return ridge_solve(*cache, lambda, F.linear_has_bias);
        return fit(F, S, sq, lambda, cfg).hypothesis;
    };

    // Predictions of every trained model on the shared eval points.
    Eigen::MatrixXd preds(E, T);
    parallel_for(static_cast<std::size_t>(T), [&](std::size_t t) {
        const Hypothesis h =
            fit_on(in.train_sets[t], train_caches ? &(*train_caches)[t] : nullptr);
        preds.col(static_cast<Eigen::Index>(t)) = predict(h, in.X_eval);
    });

    const Eigen::VectorXd mean_pred = preds.rowwise().mean();
    // Plain 1/T variance: the bias^2 + variance SUM is then unbiased for
    // Ave[(h_S(x) - h(x))^2] even though each part is off by var/T.
    const Eigen::VectorXd bias_sq_x = (mean_pred - in.h_eval).array().square().matrix();
    const Eigen::VectorXd var_x =
        ((preds.colwise() - mean_pred).array().square().rowwise().sum() / double(T)).matrix();

    BVDecomposition out;
    out.n_train_sets = T;
    out.n_eval_points = E;
    out.bias_sq = bias_sq_x.mean();
    out.variance = var_x.mean();
    out.noise = analytic_noise(gen);
    out.sum = out.bias_sq + out.variance + out.noise;

    // Block stderr of (bias^2 + variance): recompute the estimator on
    // disjoint blocks of train sets and take the spread of the block values.
    const int blocks = std::min(10, T);
    if (blocks >= 2) {
        std::vector<double> block_vals(static_cast<std::size_t>(blocks));
        for (int b = 0; b < blocks; ++b) {
            const int lo = b * T / blocks, hi = (b + 1) * T / blocks;
            const auto cols = preds.middleCols(lo, hi - lo);
            const Eigen::VectorXd m = cols.rowwise().mean();
            const double bias_b = (m - in.h_eval).array().square().mean();
            const double var_b =
                ((cols.colwise() - m).array().square().rowwise().sum() / double(hi - lo)).mean();
            block_vals[static_cast<std::size_t>(b)] = bias_b + var_b;
        }
        double bm = 0.0;
        for (const double v : block_vals) bm += v;
        bm /= double(blocks);
        double bv = 0.0;
        for (const double v : block_vals) bv += (v - bm) * (v - bm);
        bv /= double(blocks - 1);
        out.sum_stderr = std::sqrt(bv / double(blocks));
    }

    // Independent direct estimate of the AESL from fresh (S, x, y) triples.
    std::vector<double> direct(static_cast<std::size_t>(T));
    parallel_for(direct.size(), [&](std::size_t t) {
        const Hypothesis h =
            fit_on(in.fresh_sets[t], fresh_caches ? &(*fresh_caches)[t] : nullptr);
        const Eigen::VectorXd yhat = predict(h, in.fresh_pairs[t].X);
        direct[t] = (yhat - in.fresh_pairs[t].y).array().square().mean();
    });
    double dm = 0.0;
    for (const double v : direct) dm += v;
    dm /= double(T);
    double dv = 0.0;
    for (const double v : direct) dv += (v - dm) * (v - dm);
    dv /= double(T);
    out.aesl_direct = dm;
    out.aesl_stderr = std::sqrt(dv / double(T));
    return out;
}

std::vector<std::pair<double, BVDecomposition>> sweep_impl(const HypothesisClass& F,
                                                           const Generator& gen, int n,
                                                           const std::vector<double>& lambda_grid,
                                                           const TrainerConfig& cfg,
                                                           int n_train_sets, int n_eval_points,
                                                           std::uint64_t seed) {
    if (lambda_grid.empty()) throw InputError("aesl_sweep: empty lambda grid");
    for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] < lambda_grid[i + 1]))
            throw InputError("aesl_sweep: lambda grid must be strictly ascending");
    if (n_train_sets < 2 || n_eval_points < 1)
        throw InputError("bias_variance: need n_train_sets >= 2 and n_eval_points >= 1");

    const BvInputs in = draw_inputs(gen, n, n_train_sets, n_eval_points, seed);

    std::vector<RidgeCache> train_caches, fresh_caches;
    const bool ridge_fast = F.kind == ClassKind::RidgeLinear;
    if (ridge_fast) {
        train_caches.resize(in.train_sets.size());
        fresh_caches.resize(in.fresh_sets.size());
        parallel_for(train_caches.size(), [&](std::size_t t) {
            train_caches[t] = ridge_cache(in.train_sets[t], F.linear_has_bias);
            fresh_caches[t] = ridge_cache(in.fresh_sets[t], F.linear_has_bias);
        });
    }

    std::vector<std::pair<double, BVDecomposition>> rows;
    rows.reserve(lambda_grid.size());
    for (const double lambda : lambda_grid) {
        rows.emplace_back(lambda, decompose_one(F, gen, lambda, cfg, in,
                                                ridge_fast ? &train_caches : nullptr,
                                                ridge_fast ? &fresh_caches : nullptr));
    }
    return rows;
}

}  // namespace

BVDecomposition bias_variance_noise(const HypothesisClass& F, const Generator& gen, int n,
                                    double lambda, const TrainerConfig& cfg, int n_train_sets,
                                    int n_eval_points, std::uint64_t seed) {
    if (lambda < 0.0) throw InputError("bias_variance_noise: lambda must be nonnegative");
    return sweep_impl(F, gen, n, {lambda}, cfg, n_train_sets, n_eval_points, seed)
        .front()
        .second;
}

std::vector<std::pair<double, BVDecomposition>> aesl_sweep(const HypothesisClass& F,
                                                           const Generator& gen, int n,
                                                           const std::vector<double>& lambda_grid,
                                                           const TrainerConfig& cfg,
                                                           int n_train_sets, int n_eval_points,
                                                           std::uint64_t seed) {
    return sweep_impl(F, gen, n, lambda_grid, cfg, n_train_sets, n_eval_points, seed);
}

}  // namespace genlab

#include "genlab/erm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"

namespace genlab {

double empirical_error(const Hypothesis& f, const Dataset& S, const LossFn& fn) {
    if (S.size() == 0) throw InputError("empirical_error: empty dataset");
    const Eigen::VectorXd yhat = predict(f, S.X);
    double total = 0.0;
    for (Eigen::Index i = 0; i < S.size(); ++i) total += loss(fn, S.y(i), yhat(i));
    return total / static_cast<double>(S.size());
}

std::pair<double, double> population_error(const Hypothesis& f, const Generator& gen,
                                           const LossFn& fn, int m, std::uint64_t seed) {
    if (m < 100) throw InputError("population_error: need m >= 100");

    // Exact: linear predictor, gaussian-design regression, square loss.
    if (f.kind == HypothesisKind::Linear && f.output_mode == OutputMode::RealValued &&
        gen.kind == GeneratorKind::LinearGaussianRegression && fn.kind == LossKind::Square) {
        const double b = f.has_bias ? f.bias : 0.0;
        const double d2 = (f.params - gen.true_weights).squaredNorm() + b * b;
        return {d2 + gen.noise_sigma * gen.noise_sigma, 0.0};
    }

    // Exact: bias-free linear classifier against a linear-threshold target.
    // For x ~ N(0,I), P(sign(w.x) != sign(w*.x)) is the angle between w and w*
    // over pi.
    if (f.kind == HypothesisKind::Linear && f.output_mode == OutputMode::SignThresholded &&
        !f.has_bias && gen.kind == GeneratorKind::LinearThresholdClassification &&
        fn.kind == LossKind::ZeroOne) {
        const double q = gen.label_flip_prob;
        const double wn = f.params.norm(), tn = gen.true_weights.norm();
        if (wn == 0.0 || tn == 0.0) return {0.5, 0.0};
        double cosang = f.params.dot(gen.true_weights) / (wn * tn);
        cosang = std::clamp(cosang, -1.0, 1.0);
        const double disagree = std::acos(cosang) / std::numbers::pi;
        return {q + (1.0 - 2.0 * q) * disagree, 0.0};
    }

    const Dataset fresh = generate(gen, m, mix64(seed ^ fnv1a64("population-error")));
    const Eigen::VectorXd yhat = predict(f, fresh.X);
    double total = 0.0, total_sq = 0.0;
    for (Eigen::Index i = 0; i < fresh.size(); ++i) {
        const double l = loss(fn, fresh.y(i), yhat(i));
        total += l;
        total_sq += l * l;
    }
    const double mean = total / m;
    const double var = std::max(0.0, total_sq / m - mean * mean);
    return {mean, std::sqrt(var / m)};
}

namespace {

double penalty_value(const Hypothesis& f, double lambda, int norm_order) {
    if (norm_order != 1 && norm_order != 2)
        throw InputError("regularized_objective: norm order must be 1 or 2");
    double pen = 0.0;
    if (f.kind == HypothesisKind::Linear) {
        pen = norm_order == 1 ? f.params.lpNorm<1>() : f.params.squaredNorm();
    } else if (f.kind == HypothesisKind::Mlp) {
        if (norm_order == 1) {
            // L1 over weights, biases excluded.
            const auto sizes = f.arch.layer_sizes();
            int off = 0;
            for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
                const int nw = sizes[l] * sizes[l + 1];
                pen += f.params.segment(off, nw).lpNorm<1>();
                off += nw + sizes[l + 1];
            }
        } else {
            pen = mlp_weight_sq_norm(f.arch, f.params);
        }
    } else {
        throw UnsupportedError("regularized_objective: hypothesis is not parametric");
    }
    return lambda * pen;
}

}  // namespace

double regularized_objective(const Hypothesis& f, const Dataset& S, const LossFn& fn,
                             double lambda, int norm_order) {
    if (lambda < 0.0) throw InputError("regularized_objective: lambda must be nonnegative");
    return empirical_error(f, S, fn) + penalty_value(f, lambda, norm_order);
}

namespace {

// ---------------------------------------------------------------------------
// Exact solvers
// ---------------------------------------------------------------------------

FitResult fit_finite(const HypothesisClass& F, const Dataset& S, const LossFn& fn) {
    const auto& members = enumerate_members(F);
    FitResult best;
    best.final_objective = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double err = empirical_error(members[i], S, fn);
        if (err < best.final_objective) {
            best.final_objective = err;
            best.hypothesis = members[i];
            best.restart_index = static_cast<int>(i);
        }
    }
    return best;
}

// Closed-form ridge: mean-square objective + lambda*||w||^2, so the normal
// equations carry n*lambda. An unpenalized intercept is handled by centering.
FitResult fit_ridge(const HypothesisClass& F, const Dataset& S, const LossFn& fn,
                    double lambda) {
    if (fn.kind != LossKind::Square)
        throw UnsupportedError("fit: ridge-linear requires the square loss");
    const Eigen::Index n = S.size(), p = S.feature_dim();

    Eigen::MatrixXd X = S.X;
    Eigen::VectorXd y = S.y;
    Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(p);
    double y_mean = 0.0;
    if (F.linear_has_bias) {
        x_mean = X.colwise().mean();
        y_mean = y.mean();
        X.rowwise() -= x_mean;
        y.array() -= y_mean;
    }

    Eigen::MatrixXd A = X.transpose() * X;
    A.diagonal().array() += static_cast<double>(n) * lambda;
    Eigen::VectorXd w;
    if (lambda > 0.0) {
        w = A.llt().solve(X.transpose() * y);
    } else {
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < p)
            throw NumericError("fit: singular normal equations at lambda = 0 (collinear features)");
        w = qr.solve(y);
    }

    FitResult res;
    res.hypothesis = F.linear_has_bias
                         ? make_linear_with_bias(w, y_mean - x_mean * w)
                         : make_linear(w);
    res.final_objective = regularized_objective(res.hypothesis, S, fn, lambda, 2);
    return res;
}

FitResult fit_lasso(const HypothesisClass& F, const Dataset& S, const LossFn& fn,
                    double lambda) {
    if (fn.kind != LossKind::Square)
        throw UnsupportedError("fit: lasso-linear requires the square loss");
    const Eigen::Index n = S.size(), p = S.feature_dim();
    const double nn = static_cast<double>(n);

    constexpr double kTol = 1e-8;
    constexpr int kMaxSweeps = 10000;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    double b = F.linear_has_bias ? S.y.mean() : 0.0;
    Eigen::VectorXd residual = S.y;
    residual.array() -= b;
    const Eigen::VectorXd col_sq = S.X.colwise().squaredNorm();

    int sweeps = 0;
    for (; sweeps < kMaxSweeps; ++sweeps) {
        double max_update = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (col_sq(j) == 0.0) continue;
            const double c = S.X.col(j).dot(residual) + w(j) * col_sq(j);
            const double thresh = nn * lambda / 2.0;
            double wj = 0.0;
            if (c > thresh)
                wj = (c - thresh) / col_sq(j);
            else if (c < -thresh)
                wj = (c + thresh) / col_sq(j);
            const double delta = wj - w(j);
            if (delta != 0.0) {
                residual -= delta * S.X.col(j);
                w(j) = wj;
                max_update = std::max(max_update, std::abs(delta));
            }
        }
        if (F.linear_has_bias) {
            const double db = residual.mean();
            if (db != 0.0) {
                residual.array() -= db;
                b += db;
                max_update = std::max(max_update, std::abs(db));
            }
        }
        if (max_update < kTol) break;
    }

    FitResult res;
    res.hypothesis = F.linear_has_bias ? make_linear_with_bias(w, b) : make_linear(w);
    res.final_objective = regularized_objective(res.hypothesis, S, fn, lambda, 1);
    res.epochs_run = sweeps;
    return res;
}

// ---------------------------------------------------------------------------
// Gradient-descent trainer (mlp)
// ---------------------------------------------------------------------------

struct GdRun {
    Eigen::VectorXd params;
    double objective = std::numeric_limits<double>::infinity();
    int epochs = 0;
    bool stopped_early = false;
    std::vector<TracePoint> trace;
};

GdRun gd_train(const MlpArchitecture& arch, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const LossFn& eval_loss, double lambda, const TrainerConfig& cfg, int restart) {
    const Eigen::Index n = X.rows();

    // Early-stopping validation split (shared across restarts).
    std::vector<int> train_idx, val_idx;
    if (cfg.early_stopping) {
        const double frac = cfg.early_stopping->validation_fraction;
        if (frac <= 0.0 || frac >= 1.0)
            throw ConfigError("trainer: validation_fraction must lie in (0,1)");
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        Rng split_rng = Rng::stream(cfg.seed, "gd/valsplit");
        split_rng.shuffle(order);
        const int n_val = std::max(1, static_cast<int>(std::floor(frac * double(n))));
        val_idx.assign(order.begin(), order.begin() + n_val);
        train_idx.assign(order.begin() + n_val, order.end());
        if (train_idx.empty()) throw ConfigError("trainer: validation split leaves no train data");
    } else {
        train_idx.resize(static_cast<std::size_t>(n));
        std::iota(train_idx.begin(), train_idx.end(), 0);
    }

    Eigen::MatrixXd Xtr(train_idx.size(), X.cols());
    Eigen::VectorXd ytr(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
        Xtr.row(static_cast<Eigen::Index>(i)) = X.row(train_idx[i]);
        ytr(static_cast<Eigen::Index>(i)) = y(train_idx[i]);
    }
    Eigen::MatrixXd Xval(val_idx.size(), X.cols());
    Eigen::VectorXd yval(val_idx.size());
    for (std::size_t i = 0; i < val_idx.size(); ++i) {
        Xval.row(static_cast<Eigen::Index>(i)) = X.row(val_idx[i]);
        yval(static_cast<Eigen::Index>(i)) = y(val_idx[i]);
    }

    auto validation_error = [&](const Eigen::VectorXd& params) {
        const Eigen::VectorXd out = mlp_forward(arch, params, Xval);
        double total = 0.0;
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            const double pred =
                eval_loss.kind == LossKind::ZeroOne ? sign_plus(out(i)) : out(i);
            total += loss(eval_loss, yval(i), pred);
        }
        return total / double(out.size());
    };

    Rng init_rng = Rng::stream(cfg.seed, "gd/init", static_cast<std::uint64_t>(restart));
    GdRun run;
    run.params = mlp_init_params(arch, cfg.init_scale, init_rng);

    Eigen::VectorXd grad(run.params.size());
    Eigen::VectorXd best_val_params = run.params;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;
    double prev_objective = std::numeric_limits<double>::infinity();

    const Eigen::Index ntr = Xtr.rows();
    const int batch = cfg.batch_size > 0 ? std::min<int>(cfg.batch_size, int(ntr)) : int(ntr);
    std::vector<int> batch_order(static_cast<std::size_t>(ntr));
    std::iota(batch_order.begin(), batch_order.end(), 0);

    int epoch = 0;
    for (; epoch < cfg.max_epochs; ++epoch) {
        double objective;
        if (batch == int(ntr)) {
            objective = mlp_objective_gradient(arch, run.params, Xtr, ytr, lambda, grad);
            run.params -= cfg.learning_rate * grad;
        } else {
            Rng shuffle_rng = Rng::stream(
                cfg.seed, "gd/shuffle",
                (static_cast<std::uint64_t>(restart) << 32) | static_cast<std::uint64_t>(epoch));
            shuffle_rng.shuffle(batch_order);
            for (Eigen::Index start = 0; start < ntr; start += batch) {
                const Eigen::Index len = std::min<Eigen::Index>(batch, ntr - start);
                Eigen::MatrixXd Xb(len, Xtr.cols());
                Eigen::VectorXd yb(len);
                for (Eigen::Index i = 0; i < len; ++i) {
                    Xb.row(i) = Xtr.row(batch_order[static_cast<std::size_t>(start + i)]);
                    yb(i) = ytr(batch_order[static_cast<std::size_t>(start + i)]);
                }
                mlp_objective_gradient(arch, run.params, Xb, yb, lambda, grad);
                run.params -= cfg.learning_rate * grad;
            }
            Eigen::VectorXd tmp(run.params.size());
            objective = mlp_objective_gradient(arch, run.params, Xtr, ytr, lambda, tmp);
        }

        TracePoint pt;
        pt.epoch = epoch;
        pt.train_objective = objective;
        pt.validation_error = std::numeric_limits<double>::quiet_NaN();

        if (cfg.early_stopping) {
            const double val = validation_error(run.params);
            pt.validation_error = val;
            if (val < best_val) {
                best_val = val;
                best_val_params = run.params;
                since_best = 0;
            } else if (++since_best >= cfg.early_stopping->patience) {
                run.trace.push_back(pt);
                run.stopped_early = true;
                break;
            }
        }
        run.trace.push_back(pt);

        if (!std::isfinite(objective)) break;   // diverged; restarts pick up the slack
        if (std::isfinite(prev_objective)) {
            const double improvement = prev_objective - objective;
            if (improvement >= 0.0 && improvement < cfg.tolerance) break;
        }
        prev_objective = objective;
    }

    if (cfg.early_stopping) run.params = best_val_params;
    Eigen::VectorXd tmp(run.params.size());
    run.objective = mlp_objective_gradient(arch, run.params, Xtr, ytr, lambda, tmp);
    run.epochs = epoch < cfg.max_epochs ? epoch + 1 : cfg.max_epochs;
    return run;
}

FitResult fit_mlp(const HypothesisClass& F, const Dataset& S, const LossFn& fn, double lambda,
                  const TrainerConfig& cfg) {
    if (cfg.restarts < 1) throw ConfigError("trainer: restarts must be >= 1");
    if (F.arch.input_dim != S.feature_dim())
        throw InputError("fit: mlp input dimension does not match dataset");

    // Square-loss surrogate against +-1 targets for classification; the
    // returned hypothesis is sign-thresholded at evaluation.
    std::vector<GdRun> runs(static_cast<std::size_t>(cfg.restarts));
    parallel_for(runs.size(), [&](std::size_t r) {
        runs[r] = gd_train(F.arch, S.X, S.y, fn, lambda, cfg, static_cast<int>(r));
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (std::isnan(runs[best].objective) || runs[r].objective < runs[best].objective) best = r;

    FitResult res;
    const OutputMode mode =
        fn.kind == LossKind::ZeroOne ? OutputMode::SignThresholded : OutputMode::RealValued;
    res.hypothesis = make_mlp(F.arch, runs[best].params, mode);
    res.final_objective = runs[best].objective;
    res.epochs_run = runs[best].epochs;
    res.restart_index = static_cast<int>(best);
    res.stopped_early = runs[best].stopped_early;
    res.trace = std::move(runs[best].trace);
    return res;
}

}  // namespace

FitResult fit(const HypothesisClass& F, const Dataset& S, const LossFn& fn, double lambda,
              const TrainerConfig& cfg) {
    if (lambda < 0.0) throw InputError("fit: lambda must be nonnegative");
    if (S.size() == 0) throw InputError("fit: empty dataset");
    switch (F.kind) {
        case ClassKind::Finite:
            return fit_finite(F, S, fn);
        case ClassKind::RidgeLinear:
            return fit_ridge(F, S, fn, lambda);
        case ClassKind::LassoLinear:
            return fit_lasso(F, S, fn, lambda);
        case ClassKind::Mlp:
            return fit_mlp(F, S, fn, lambda, cfg);
        case ClassKind::LinearThreshold:
            throw UnsupportedError("fit: linear-threshold classes have no trainer");
    }
    throw UnsupportedError("fit: unknown class kind");
}

std::vector<CorrespondenceRow> constraint_lambda_correspondence(
    const HypothesisClass& F, const Dataset& S, const LossFn& fn,
    const std::vector<double>& lambda_grid) {
    if (F.kind != ClassKind::RidgeLinear)
        throw UnsupportedError("constraint_lambda_correspondence: ridge-linear classes only");
    std::vector<CorrespondenceRow> rows;
    rows.reserve(lambda_grid.size());
    for (const double lambda : lambda_grid) {
        const FitResult res = fit(F, S, fn, lambda, {});
        CorrespondenceRow row;
        row.lambda = lambda;
        row.weight_norm = res.hypothesis.params.norm();
        row.c = row.weight_norm;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace genlab

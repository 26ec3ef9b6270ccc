#include "genlab/complexity.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"

namespace genlab {

SignVector::SignVector(Eigen::VectorXd v) : s(std::move(v)) {
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) != 1.0 && s(i) != -1.0)
            throw InputError("SignVector: entries must be +-1");
}

SignVector random_signs(Eigen::Index n, std::uint64_t seed, std::uint64_t index) {
    Rng rng = Rng::stream(seed, "sigma", index);
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = rng.pick_sign();
    return SignVector(std::move(s));
}

namespace {

/// Member values on the sample: row m holds h_m(z_1..z_n).
Eigen::MatrixXd member_values(const HypothesisClass& F, const Dataset& S) {
    const auto& members = enumerate_members(F);
    Eigen::MatrixXd V(static_cast<Eigen::Index>(members.size()), S.size());
    for (std::size_t m = 0; m < members.size(); ++m)
        V.row(static_cast<Eigen::Index>(m)) = predict(members[m], S.X).transpose();
    return V;
}

/**
 * Exact E_sigma[max_m (1/n) sum_i sigma_i V(m,i)] over all 2^n sign vectors.
 * Gray-code enumeration keeps per-sigma work at one column update.
 */
double rademacher_exact_values(const Eigen::MatrixXd& V) {
    const Eigen::Index n = V.cols();
    if (n > kExactSigmaCap)
        throw GuardError("rademacher_exact: n exceeds the 2^n enumeration cap of " +
                         std::to_string(kExactSigmaCap));

    Eigen::VectorXd sigma = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd dots = V.rowwise().sum();   // per-member sum sigma_i V(m,i)
    double total = dots.maxCoeff();

    const std::uint64_t count = 1ull << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const int flip = std::countr_zero(k);   // Gray code: flip lowest set bit index
        sigma(flip) = -sigma(flip);
        dots += 2.0 * sigma(flip) * V.col(flip);
        total += dots.maxCoeff();
    }
    return total / (double(count) * double(n));
}

bool is_sign_output_parametric(const HypothesisClass& F) {
    return F.kind == ClassKind::LinearThreshold || F.kind == ClassKind::Mlp;
}

}  // namespace

std::pair<double, SupDiagnostics> sup_correlation(const HypothesisClass& F, const Dataset& S,
                                                  const SignVector& sigma,
                                                  const TrainerConfig& cfg) {
    if (sigma.size() != S.size())
        throw InputError("sup_correlation: sigma length does not match sample size");
    const double n = static_cast<double>(S.size());

    if (F.kind == ClassKind::Finite) {
        const Eigen::MatrixXd V = member_values(F, S);
        const Eigen::VectorXd corr = V * sigma.s / n;
        SupDiagnostics diag;
        diag.solver = SupSolver::Enumeration;
        diag.exact = true;
        Eigen::Index best = 0;
        const double value = corr.maxCoeff(&best);
        diag.best_member = static_cast<int>(best);
        return {value, diag};
    }

    if (!is_sign_output_parametric(F))
        throw UnsupportedError(
            "sup_correlation: unbounded real-valued classes have no finite sup; "
            "use a sign-output class");

    // Square-loss surrogate trained against sigma as +-1 targets; the
    // thresholded correlation of the best restart is a lower bound on the sup.
    SupDiagnostics diag;
    diag.solver = SupSolver::FitBased;
    diag.exact = false;

    auto thresholded_correlation = [&](const Eigen::VectorXd& raw) {
        double c = 0.0;
        for (Eigen::Index i = 0; i < raw.size(); ++i) c += sigma.s(i) * sign_plus(raw(i));
        return c / n;
    };

    if (F.kind == ClassKind::LinearThreshold) {
        // Convex surrogate, closed form; restarts add nothing.
        Dataset target = S;
        target.y = sigma.s;
        const HypothesisClass ridge = make_ridge_class(F.feature_dim, F.linear_has_bias);
        const FitResult res = fit(ridge, target, square_loss(), 1e-10, {});
        diag.restarts_used = 1;
        return {thresholded_correlation(predict(res.hypothesis, S.X)), diag};
    }

    // Mlp: gradient descent on the surrogate, best of cfg.restarts inits.
    // Training stops as soon as the thresholded correlation hits 1 (the sup
    // is attained; later epochs and restarts cannot improve a lower bound).
    double best = -std::numeric_limits<double>::infinity();
    const int check_every = 10;
    Eigen::VectorXd grad;
    for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
        Rng init_rng = Rng::stream(cfg.seed, "sup/init", static_cast<std::uint64_t>(r));
        Eigen::VectorXd params = mlp_init_params(F.arch, cfg.init_scale, init_rng);
        double prev = std::numeric_limits<double>::infinity();
        double corr = thresholded_correlation(mlp_forward(F.arch, params, S.X));
        best = std::max(best, corr);
        for (int epoch = 0; epoch < cfg.max_epochs && best < 1.0; ++epoch) {
            const double obj = mlp_objective_gradient(F.arch, params, S.X, sigma.s, 0.0, grad);
            if (!std::isfinite(obj)) break;
            params -= cfg.learning_rate * grad;
            if (epoch % check_every == check_every - 1 || epoch + 1 == cfg.max_epochs) {
                corr = thresholded_correlation(mlp_forward(F.arch, params, S.X));
                best = std::max(best, corr);
            }
            const double improvement = prev - obj;
            if (improvement >= 0.0 && improvement < cfg.tolerance) break;
            prev = obj;
        }
        corr = thresholded_correlation(mlp_forward(F.arch, params, S.X));
        best = std::max(best, corr);
        diag.restarts_used = r + 1;
        if (best >= 1.0) break;
    }
    return {best, diag};
}

ComplexityEstimate rademacher_exact(const HypothesisClass& F, const Dataset& S) {
    if (F.kind != ClassKind::Finite)
        throw UnsupportedError("rademacher_exact: exact enumeration needs a finite class");
    ComplexityEstimate est;
    est.value = rademacher_exact_values(member_values(F, S));
    est.stderr_ = 0.0;
    est.method = ComplexityMethod::ExactEnumeration;
    est.n_sigma = 1ull << S.size();
    est.sup_solver = SupSolver::Enumeration;
    return est;
}

ComplexityEstimate rademacher_mc(const HypothesisClass& F, const Dataset& S, int n_sigma,
                                 const TrainerConfig& cfg, std::uint64_t seed) {
    if (n_sigma < 2) throw InputError("rademacher_mc: need n_sigma >= 2");

    std::vector<double> sups(static_cast<std::size_t>(n_sigma));
    if (F.kind == ClassKind::Finite) {
        const Eigen::MatrixXd V = member_values(F, S);
        const double n = static_cast<double>(S.size());
        parallel_for(sups.size(), [&](std::size_t k) {
            const SignVector sigma = random_signs(S.size(), seed, k);
            sups[k] = (V * sigma.s).maxCoeff() / n;
        });
    } else {
        parallel_for(sups.size(), [&](std::size_t k) {
            const SignVector sigma = random_signs(S.size(), seed, k);
            TrainerConfig sub = cfg;
            sub.seed = mix64(seed ^ fnv1a64("sup-sigma")) + k;
            sups[k] = sup_correlation(F, S, sigma, sub).first;
        });
    }

    double mean = 0.0;
    for (const double v : sups) mean += v;
    mean /= double(n_sigma);
    double var = 0.0;
    for (const double v : sups) var += (v - mean) * (v - mean);
    var /= double(n_sigma);

    ComplexityEstimate est;
    est.value = mean;
    est.stderr_ = std::sqrt(var / double(n_sigma));
    est.method = ComplexityMethod::MonteCarlo;
    est.n_sigma = static_cast<std::uint64_t>(n_sigma);
    est.sup_solver = F.kind == ClassKind::Finite ? SupSolver::Enumeration : SupSolver::FitBased;
    est.restarts = F.kind == ClassKind::Finite ? 0 : cfg.restarts;
    est.per_sigma = std::move(sups);
    return est;
}

ComplexityEstimate rademacher_population(const HypothesisClass& F, const Generator& gen, int n,
                                         int n_samples, int n_sigma, const TrainerConfig& cfg,
                                         std::uint64_t seed) {
    if (n < 1 || n_samples < 1) throw InputError("rademacher_population: counts must be >= 1");

    std::vector<ComplexityEstimate> per_sample(static_cast<std::size_t>(n_samples));
    parallel_for(per_sample.size(), [&](std::size_t t) {
        const std::uint64_t sample_seed = mix64(seed ^ fnv1a64("rad-pop-sample")) + t;
        const Dataset S = generate(gen, n, sample_seed);
        per_sample[t] = rademacher_mc(F, S, n_sigma, cfg, mix64(sample_seed));
    });

    double mean = 0.0;
    for (const auto& e : per_sample) mean += e.value;
    mean /= double(n_samples);

    // Between-sample spread plus the mean within-sample MC error.
    double between = 0.0, within = 0.0;
    for (const auto& e : per_sample) {
        between += (e.value - mean) * (e.value - mean);
        within += e.stderr_ * e.stderr_;
    }
    between /= double(n_samples);
    within /= double(n_samples);

    ComplexityEstimate est;
    est.value = mean;
    est.stderr_ = std::sqrt((between + within) / double(n_samples));
    est.method = ComplexityMethod::MonteCarlo;
    est.n_sigma = static_cast<std::uint64_t>(n_sigma) * static_cast<std::uint64_t>(n_samples);
    est.sup_solver = per_sample.front().sup_solver;
    est.restarts = per_sample.front().restarts;
    return est;
}

std::pair<double, double> affine_class_complexity(const HypothesisClass& F, double a, double b,
                                                  const Dataset& S) {
    if (F.kind != ClassKind::Finite)
        throw UnsupportedError("affine_class_complexity: finite classes only");
    const Eigen::MatrixXd V = member_values(F, S);
    const Eigen::MatrixXd transformed = (a * V).array() + b;
    return {rademacher_exact_values(transformed),
            std::abs(a) * rademacher_exact_values(V)};
}

double loss_class_complexity(double rad_f) {
    if (rad_f < 0.0) throw InputError("loss_class_complexity: rad must be nonnegative");
    return rad_f / 2.0;
}

double loss_class_complexity_direct(const HypothesisClass& F, const Dataset& S) {
    if (!S.classification)
        throw UnsupportedError("loss_class_complexity_direct: needs +-1 labels");
    const Eigen::MatrixXd V = member_values(F, S);
    // Loss-class values on the labeled sample: (1 - y_i f(x_i)) / 2.
    Eigen::MatrixXd L(V.rows(), V.cols());
    for (Eigen::Index m = 0; m < V.rows(); ++m)
        for (Eigen::Index i = 0; i < V.cols(); ++i) L(m, i) = (1.0 - S.y(i) * V(m, i)) / 2.0;
    return rademacher_exact_values(L);
}

namespace {

bool finite_class_shatters(const Eigen::MatrixXd& signs, const std::vector<int>& subset) {
    // signs: member x candidate sign matrix. Shattered iff the members realize
    // all 2^d patterns on the subset.
    const std::size_t d = subset.size();
    if (d > 25) return false;
    std::vector<bool> seen(1ull << d, false);
    std::size_t distinct = 0;
    for (Eigen::Index m = 0; m < signs.rows(); ++m) {
        std::uint64_t pattern = 0;
        for (std::size_t j = 0; j < d; ++j)
            if (signs(m, subset[j]) > 0.0) pattern |= (1ull << j);
        if (!seen[pattern]) {
            seen[pattern] = true;
            if (++distinct == (1ull << d)) return true;
        }
    }
    return false;
}

bool linear_threshold_shatters(const Eigen::MatrixXd& augmented, const std::vector<int>& subset) {
    // Homogeneous linear thresholds shatter a point set iff the (augmented)
    // points are linearly independent.
    Eigen::MatrixXd pts(augmented.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t j = 0; j < subset.size(); ++j) pts.col(static_cast<Eigen::Index>(j)) = augmented.col(subset[j]);
    if (pts.cols() > pts.rows()) return false;
    return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(pts).rank() == pts.cols();
}

}  // namespace

int vc_dimension(const HypothesisClass& F, const std::vector<Eigen::VectorXd>& candidates,
                 int d_max) {
    if (candidates.size() > kVcCandidateCap)
        throw GuardError("vc_dimension: candidate point count exceeds the cap of " +
                         std::to_string(kVcCandidateCap));
    if (candidates.empty() || d_max < 1) return 0;
    const int q = static_cast<int>(candidates.size());

    std::function<bool(const std::vector<int>&)> shattered;
    Eigen::MatrixXd signs, augmented;
    if (F.kind == ClassKind::Finite) {
        const auto& members = enumerate_members(F);
        signs.resize(static_cast<Eigen::Index>(members.size()), q);
        for (std::size_t m = 0; m < members.size(); ++m)
            for (int c = 0; c < q; ++c)
                signs(static_cast<Eigen::Index>(m), c) = sign_plus(predict(members[m], candidates[static_cast<std::size_t>(c)]));
        shattered = [&](const std::vector<int>& subset) {
            return finite_class_shatters(signs, subset);
        };
    } else if (F.kind == ClassKind::LinearThreshold) {
        const int p = F.feature_dim;
        augmented.resize(p + (F.linear_has_bias ? 1 : 0), q);
        for (int c = 0; c < q; ++c) {
            if (candidates[static_cast<std::size_t>(c)].size() != p)
                throw InputError("vc_dimension: candidate point dimension mismatch");
            augmented.col(c).head(p) = candidates[static_cast<std::size_t>(c)];
            if (F.linear_has_bias) augmented(p, c) = 1.0;
        }
        shattered = [&](const std::vector<int>& subset) {
            return linear_threshold_shatters(augmented, subset);
        };
    } else {
        throw UnsupportedError("vc_dimension: finite or linear-threshold classes only");
    }

    // Level-wise search: only extend subsets already known to be shattered
    // (supersets of unshattered sets cannot be shattered).
    std::vector<std::vector<int>> frontier;
    for (int c = 0; c < q; ++c)
        if (shattered({c})) frontier.push_back({c});
    if (frontier.empty()) return 0;

    int d = 1;
    while (d < d_max) {
        std::vector<std::vector<int>> next;
        for (const auto& subset : frontier) {
            for (int c = subset.back() + 1; c < q; ++c) {
                std::vector<int> extended = subset;
                extended.push_back(c);
                if (shattered(extended)) next.push_back(std::move(extended));
            }
        }
        if (next.empty()) break;
        frontier = std::move(next);
        ++d;
    }
    return d;
}

double vc_rad_bound(int d, long long n) {
    if (d < 1) throw InputError("vc_rad_bound: need d >= 1");
    if (n < 2) throw InputError("vc_rad_bound: need n >= 2");
    return std::sqrt(2.0 * double(d) * std::log(double(n)) / double(n));
}

}  // namespace genlab

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "genlab/complexity.hpp"
#include "genlab/errors.hpp"
#include "genlab/rng.hpp"

using namespace genlab;

namespace {

Dataset points_dataset(const Eigen::MatrixXd& X, bool classification = false) {
    Dataset ds;
    ds.X = X;
    ds.y = Eigen::VectorXd::Ones(X.rows());
    ds.classification = classification;
    return ds;
}

// n distinct 1-d points 0..n-1; handy support for table classes.
Dataset index_points(int n) {
    Eigen::MatrixXd X(n, 1);
    for (int i = 0; i < n; ++i) X(i, 0) = double(i);
    return points_dataset(X);
}

Hypothesis table_on(const Dataset& ds, const Eigen::VectorXd& values) {
    return make_table(ds.X, values);
}

/// All 2^n sign tables on the sample points.
HypothesisClass all_labelings_class(const Dataset& ds) {
    const int n = static_cast<int>(ds.size());
    std::vector<Hypothesis> members;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        Eigen::VectorXd vals(n);
        for (int i = 0; i < n; ++i) vals(i) = (mask >> i) & 1 ? 1.0 : -1.0;
        members.push_back(table_on(ds, vals));
    }
    return make_finite_class(std::move(members));
}

/// Independent oracle: plain double loop over all sign vectors and members
/// (no Gray-code incremental update).
double rad_exact_bruteforce(const std::vector<Eigen::VectorXd>& member_values, int n) {
    double total = 0.0;
    const std::uint64_t count = 1ull << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& vals : member_values) {
            double corr = 0.0;
            for (int i = 0; i < n; ++i)
                corr += ((mask >> i) & 1 ? 1.0 : -1.0) * vals(i);
            best = std::max(best, corr / double(n));
        }
        total += best;
    }
    return total / double(count);
}

HypothesisClass random_sign_table_class(const Dataset& ds, int m, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, "sign-tables");
    std::vector<Hypothesis> members;
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXd vals(ds.size());
        for (Eigen::Index i = 0; i < ds.size(); ++i) vals(i) = rng.pick_sign();
        members.push_back(table_on(ds, vals));
    }
    return make_finite_class(std::move(members));
}

/// Exact sup of the thresholded correlation over bias-free linear thresholds
/// in the plane: sweep all angular sectors between consecutive point normals.
double linear_sup_angle_sweep(const Eigen::MatrixXd& X, const Eigen::VectorXd& sigma) {
    const Eigen::Index n = X.rows();
    std::vector<double> angles;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double phi = std::atan2(X(i, 1), X(i, 0));
        angles.push_back(phi + std::numbers::pi / 2.0);   // boundary directions
        angles.push_back(phi - std::numbers::pi / 2.0);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const double base : angles) {
        for (const double offset : {1e-7, -1e-7}) {   // interior of both adjacent sectors
            const double theta = base + offset;
            const Eigen::Vector2d w(std::cos(theta), std::sin(theta));
            double corr = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double s = X.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
                corr += sigma(i) * s;
            }
            best = std::max(best, corr / double(n));
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("complexity") {

TEST_CASE("sup_correlation: perfect member, singleton alignment") {
    const Dataset ds = index_points(6);
    Rng rng = Rng::stream(1, "sigma-fixed");
    Eigen::VectorXd sig(6);
    for (int i = 0; i < 6; ++i) sig(i) = rng.pick_sign();
    const SignVector sigma(sig);

    // a class containing a member matching sigma exactly: sup = 1
    const HypothesisClass with_perfect =
        make_finite_class({table_on(ds, Eigen::VectorXd::Ones(6)), table_on(ds, sig)});
    CHECK(sup_correlation(with_perfect, ds, sigma, {}).first == 1.0);

    // singleton {h}: sigma = h values -> 1, negated -> -1
    const HypothesisClass singleton = make_finite_class({table_on(ds, sig)});
    CHECK(sup_correlation(singleton, ds, sigma, {}).first == 1.0);
    CHECK(sup_correlation(singleton, ds, SignVector(-sig), {}).first == -1.0);

    Eigen::VectorXd bad = Eigen::VectorXd::Ones(5);
    CHECK_THROWS_AS(sup_correlation(singleton, ds, SignVector(bad), {}), InputError);
}

TEST_CASE("sup_correlation equals the exhaustive scan on 16 random sign tables") {
    const Dataset ds = index_points(6);
    const HypothesisClass cls = random_sign_table_class(ds, 16, 7);
    Rng rng = Rng::stream(2, "sigma-rand");
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd sig(6);
        for (int i = 0; i < 6; ++i) sig(i) = rng.pick_sign();
        const SignVector sigma(sig);

        double oracle = -std::numeric_limits<double>::infinity();
        for (const auto& member : enumerate_members(cls)) {
            double corr = 0.0;
            for (Eigen::Index i = 0; i < ds.size(); ++i)
                corr += sig(i) * member.table_values(i);
            oracle = std::max(oracle, corr / 6.0);
        }
        CHECK(sup_correlation(cls, ds, sigma, {}).first == doctest::Approx(oracle).epsilon(1e-14));
    }
}

TEST_CASE("fit-based sup never exceeds the exact sup (2-d linear thresholds)") {
    Rng rng = Rng::stream(3, "linear-sup");
    const HypothesisClass cls = make_linear_threshold_class(2, false);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 8;
        Eigen::MatrixXd X(n, 2);
        for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
        Eigen::VectorXd sig(n);
        for (int i = 0; i < n; ++i) sig(i) = rng.pick_sign();
        const Dataset ds = points_dataset(X, true);

        const double exact = linear_sup_angle_sweep(X, sig);
        const double fitted = sup_correlation(cls, ds, SignVector(sig), {}).first;
        CHECK(fitted <= exact + 1e-12);
    }
}

TEST_CASE("rademacher_exact: singleton 0, all-labelings 1, {h,-h} = 1/2") {
    const Dataset two = index_points(2);
    const HypothesisClass sign_pair = make_finite_class(
        {table_on(two, Eigen::VectorXd::Ones(2)), table_on(two, -Eigen::VectorXd::Ones(2))});
    const ComplexityEstimate pair_est = rademacher_exact(sign_pair, two);
    // enumerating the 4 sign vectors: sup = |s1 + s2| / 2; mean (1+0+0+1)/4
    CHECK(pair_est.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pair_est.stderr_ == 0.0);
    CHECK(pair_est.n_sigma == 4);

    const Dataset five = index_points(5);
    const HypothesisClass singleton = make_finite_class({table_on(five, Eigen::VectorXd::Ones(5))});
    CHECK(rademacher_exact(singleton, five).value == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(rademacher_exact(all_labelings_class(five), five).value ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rademacher_exact matches the brute-force oracle on random classes") {
    Rng rng = Rng::stream(4, "rad-oracle");
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5));
        const int m = 2 + static_cast<int>(rng.below(10));
        const Dataset ds = index_points(n);
        std::vector<Hypothesis> members;
        std::vector<Eigen::VectorXd> values;
        for (int k = 0; k < m; ++k) {
            Eigen::VectorXd vals(n);
            for (int i = 0; i < n; ++i) vals(i) = rng.normal();   // real-valued members too
            members.push_back(table_on(ds, vals));
            values.push_back(vals);
        }
        const double expected = rad_exact_bruteforce(values, n);
        const double got = rademacher_exact(make_finite_class(members), ds).value;
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rademacher_exact guards") {
    const Dataset big = index_points(21);
    CHECK_THROWS_AS(rademacher_exact(make_finite_class({table_on(big, big.y)}), big), GuardError);
    CHECK_THROWS_AS(rademacher_exact(make_ridge_class(2), index_points(4)), UnsupportedError);
}

TEST_CASE("rademacher_mc: convergence to exact, singleton near zero, degenerate exactness") {
    const Dataset ds = index_points(8);

    const HypothesisClass cls = random_sign_table_class(ds, 32, 11);
    const ComplexityEstimate exact = rademacher_exact(cls, ds);
    const ComplexityEstimate mc = rademacher_mc(cls, ds, 10000, {}, 21);
    CHECK(std::abs(mc.value - exact.value) < 0.02);
    CHECK(mc.stderr_ > 0.0);
    CHECK(mc.n_sigma == 10000);

    const HypothesisClass singleton = make_finite_class({table_on(ds, ds.y)});
    const ComplexityEstimate single_mc = rademacher_mc(singleton, ds, 10000, {}, 22);
    CHECK(std::abs(single_mc.value) < 4.0 * std::max(single_mc.stderr_, 1e-12));

    const Dataset small = index_points(4);
    const ComplexityEstimate all_mc =
        rademacher_mc(all_labelings_class(small), small, 500, {}, 23);
    CHECK(all_mc.value == 1.0);
    CHECK(all_mc.stderr_ == 0.0);

    CHECK_THROWS_AS(rademacher_mc(cls, ds, 1, {}, 1), InputError);
}

TEST_CASE("rademacher_mc converges to exact within 4 stderr across seeds") {
    const Dataset ds = index_points(7);
    const HypothesisClass cls = random_sign_table_class(ds, 9, 31);
    const double exact = rademacher_exact(cls, ds).value;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const ComplexityEstimate mc = rademacher_mc(cls, ds, 4000, {}, seed);
        CHECK(std::abs(mc.value - exact) < 4.0 * mc.stderr_);
    }
}

TEST_CASE("rademacher_population: trivial classes and the shared-seed oracle") {
    const Generator gen = make_linear_threshold((Eigen::VectorXd(2) << 1, -1).finished(), 0.0, 41);

    // matches the mean of rademacher_exact over the same sampled datasets
    Eigen::MatrixXd support(4, 2);
    support << 0, 0, 1, 0, 0, 1, 1, 1;
    std::vector<Hypothesis> members;
    Rng rng = Rng::stream(5, "pop-members");
    for (int k = 0; k < 6; ++k) {
        Eigen::VectorXd w(2);
        w << rng.normal(), rng.normal();
        members.push_back(make_linear(w, OutputMode::SignThresholded));
    }
    const HypothesisClass cls = make_finite_class(members);

    const int n = 6, n_samples = 5;
    const std::uint64_t seed = 77;
    const ComplexityEstimate pop = rademacher_population(cls, gen, n, n_samples, 2000, {}, seed);

    // same per-sample seeds as the implementation contract documents
    double mean_exact = 0.0;
    for (int t = 0; t < n_samples; ++t) {
        const std::uint64_t sample_seed =
            mix64(seed ^ fnv1a64("rad-pop-sample")) + static_cast<std::uint64_t>(t);
        const Dataset S = generate(gen, n, sample_seed);
        mean_exact += rademacher_exact(cls, S).value;
    }
    mean_exact /= double(n_samples);
    CHECK(std::abs(pop.value - mean_exact) < 4.0 * pop.stderr_);

    // all-labelings case at n = 1: the two constant classifiers realize both
    // labelings of any single point, so every sup is 1 regardless of sigma
    const HypothesisClass constants = make_finite_class(
        {make_linear_with_bias(Eigen::VectorXd::Zero(2), 1.0, OutputMode::SignThresholded),
         make_linear_with_bias(Eigen::VectorXd::Zero(2), -1.0, OutputMode::SignThresholded)});
    const ComplexityEstimate pop_all = rademacher_population(constants, gen, 1, 3, 50, {}, 5);
    CHECK(pop_all.value == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<Hypothesis> ones = {make_linear(Eigen::VectorXd::Ones(2))};
    const ComplexityEstimate pop_single =
        rademacher_population(make_finite_class(ones), gen, 5, 4, 2000, {}, 6);
    CHECK(std::abs(pop_single.value) < 4.0 * std::max(pop_single.stderr_, 1e-12));
}

TEST_CASE("affine scaling: identity, reflection, and the {h,-h} case") {
    const Dataset two = index_points(2);
    const HypothesisClass pair = make_finite_class(
        {table_on(two, Eigen::VectorXd::Ones(2)), table_on(two, -Eigen::VectorXd::Ones(2))});

    const auto [same_l, same_r] = affine_class_complexity(pair, 1.0, 0.0, two);
    CHECK(same_l == doctest::Approx(same_r).epsilon(1e-15));

    const auto [neg_l, neg_r] = affine_class_complexity(pair, -1.0, 0.0, two);
    CHECK(neg_l == doctest::Approx(neg_r).epsilon(1e-15));

    const auto [scaled_l, scaled_r] = affine_class_complexity(pair, 2.0, 3.0, two);
    CHECK(scaled_l == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(scaled_r == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("affine scaling equality over random (a, b, class) triples at 1e-12") {
    Rng rng = Rng::stream(6, "affine");
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(4));
        const Dataset ds = index_points(n);
        const HypothesisClass cls =
            random_sign_table_class(ds, 2 + static_cast<int>(rng.below(8)), rng.next_u64());
        const double a = 3.0 * rng.normal();
        const double b = 3.0 * rng.normal();
        const auto [lhs, rhs] = affine_class_complexity(cls, a, b, ds);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("loss-class half-factor reduction") {
    CHECK(loss_class_complexity(1.0) == 0.5);
    CHECK(loss_class_complexity(0.0) == 0.0);

    Rng rng = Rng::stream(7, "loss-class");
    const int n = 4;
    Eigen::MatrixXd X(n, 1);
    for (int i = 0; i < n; ++i) X(i, 0) = double(i);
    Dataset ds = points_dataset(X, true);
    for (Eigen::Index i = 0; i < n; ++i) ds.y(i) = rng.pick_sign();

    const HypothesisClass cls = random_sign_table_class(ds, 8, 91);
    const double rad_f = rademacher_exact(cls, ds).value;
    const double direct = loss_class_complexity_direct(cls, ds);
    CHECK(std::abs(direct - rad_f / 2.0) <= 1e-12);
}

TEST_CASE("vc_dimension: singleton 0, all-labelings m, plane thresholds 3") {
    const Dataset pts = index_points(4);
    const HypothesisClass singleton = make_finite_class({table_on(pts, Eigen::VectorXd::Ones(4))});
    std::vector<Eigen::VectorXd> candidates;
    for (Eigen::Index i = 0; i < pts.size(); ++i) candidates.push_back(pts.X.row(i).transpose());
    CHECK(vc_dimension(singleton, candidates, 4) == 0);

    CHECK(vc_dimension(all_labelings_class(pts), candidates, 10) == 4);

    // generic points in the plane, linear thresholds with bias: exactly 3
    Rng rng = Rng::stream(8, "vc-points");
    std::vector<Eigen::VectorXd> plane;
    for (int i = 0; i < 10; ++i) {
        Eigen::VectorXd x(2);
        x << rng.normal(), rng.normal();
        plane.push_back(x);
    }
    CHECK(vc_dimension(make_linear_threshold_class(2, true), plane, 6) == 3);
    // without bias (homogeneous): 2
    CHECK(vc_dimension(make_linear_threshold_class(2, false), plane, 6) == 2);

    std::vector<Eigen::VectorXd> many(26, Eigen::VectorXd::Zero(2));
    CHECK_THROWS_AS(vc_dimension(make_linear_threshold_class(2, true), many, 3), GuardError);
    CHECK_THROWS_AS(vc_dimension(make_ridge_class(2), plane, 3), UnsupportedError);
}

TEST_CASE("vc_rad_bound: frozen value, decay, sqrt scaling in d") {
    // sqrt(4 ln 10 / 10), evaluated independently to high precision
    CHECK(vc_rad_bound(2, 10) == doctest::Approx(0.9597051824376162).epsilon(1e-12));
    CHECK(vc_rad_bound(2, 1000000) < 0.01);
    for (const long long n : {10LL, 100LL, 12345LL}) {
        CHECK(vc_rad_bound(4, n) == doctest::Approx(std::sqrt(2.0) * vc_rad_bound(2, n))
                                        .epsilon(1e-12));
    }
    CHECK_THROWS_AS(vc_rad_bound(2, 1), InputError);
    CHECK_THROWS_AS(vc_rad_bound(0, 10), InputError);
}

TEST_CASE("range, monotonicity and symmetry invariants for finite sign classes") {
    Rng rng = Rng::stream(9, "invariants");
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(4));
        const Dataset ds = index_points(n);
        const HypothesisClass small = random_sign_table_class(ds, 4, rng.next_u64());

        // range for binary classes
        const double rad = rademacher_exact(small, ds).value;
        CHECK(rad >= 0.0);
        CHECK(rad <= 1.0);

        // monotone under adding members
        std::vector<Hypothesis> extended = enumerate_members(small);
        Eigen::VectorXd extra(n);
        for (int i = 0; i < n; ++i) extra(i) = rng.pick_sign();
        extended.push_back(table_on(ds, extra));
        CHECK(rademacher_exact(make_finite_class(extended), ds).value >= rad - 1e-15);

        // symmetry under negating every member
        std::vector<Hypothesis> negated;
        for (const auto& member : enumerate_members(small))
            negated.push_back(table_on(ds, -member.table_values));
        CHECK(rademacher_exact(make_finite_class(negated), ds).value ==
              doctest::Approx(rad).epsilon(1e-12));
    }
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>

#include "genlab/bounds.hpp"
#include "genlab/errors.hpp"
#include "genlab/rng.hpp"

using namespace genlab;

TEST_SUITE("bounds") {

TEST_CASE("classification bound at emp=0, rad=1, n=100, delta=0.05") {
    const BoundReport r = generalization_bound(0.0, 1.0, 100, 0.05, BoundVariant::Classification);
    // 1 + 3*sqrt(ln(40)/100), evaluated independently to high precision
    CHECK(r.total_bound == doctest::Approx(1.5761936747919525).epsilon(1e-12));
    CHECK(r.complexity_term == 1.0);
    CHECK(r.vacuous);
    CHECK(r.total_bound == r.empirical_error + r.complexity_term + r.confidence_term);
}

TEST_CASE("general bound at emp=0.1, rad=0.2, n=400, delta=0.1") {
    const BoundReport r = generalization_bound(0.1, 0.2, 400, 0.1, BoundVariant::General);
    // 0.1 + 0.4 + 3*sqrt(ln(20)/400) = 0.7596227573903428 (high-precision
    // evaluation of the stated formula)
    CHECK(r.complexity_term == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.total_bound == doctest::Approx(0.7596227573903428).epsilon(1e-12));
    CHECK_FALSE(r.vacuous);
}

TEST_CASE("vanishing terms: rad = 0 and huge n collapse the bound to emp") {
    const BoundReport r =
        generalization_bound(0.37, 0.0, 4000000000LL, 0.05, BoundVariant::Classification);
    CHECK(r.total_bound == doctest::Approx(0.37).epsilon(1e-4));
}

TEST_CASE("delta outside (0,1) and bad inputs are rejected") {
    CHECK_THROWS_AS(generalization_bound(0.1, 0.1, 100, 0.0, BoundVariant::General), InputError);
    CHECK_THROWS_AS(generalization_bound(0.1, 0.1, 100, 1.0, BoundVariant::General), InputError);
    CHECK_THROWS_AS(generalization_bound(0.1, -0.1, 100, 0.5, BoundVariant::General), InputError);
    CHECK_THROWS_AS(generalization_bound(0.1, 0.1, 0, 0.5, BoundVariant::General), InputError);
}

TEST_CASE("monotone in rad, delta, and n") {
    Rng rng = Rng::stream(1, "bound-mono");
    for (int t = 0; t < 20; ++t) {
        const double emp = rng.uniform();
        const double rad = rng.uniform();
        const long long n = 10 + static_cast<long long>(rng.below(10000));
        const double delta = 0.01 + 0.98 * rng.uniform();
        const BoundReport base = generalization_bound(emp, rad, n, delta,
                                                      BoundVariant::Classification);
        CHECK(generalization_bound(emp, rad + 0.1, n, delta, BoundVariant::Classification)
                  .total_bound >= base.total_bound);
        CHECK(generalization_bound(emp, rad, n, delta * 0.5, BoundVariant::Classification)
                  .total_bound >= base.total_bound);
        CHECK(generalization_bound(emp, rad, 2 * n, delta, BoundVariant::Classification)
                  .total_bound <= base.total_bound);
    }
}

TEST_CASE("Eq-12 with rad_H equals Eq-13 with rad_F = 2 rad_H, exactly") {
    Rng rng = Rng::stream(2, "variant-equiv");
    for (int t = 0; t < 20; ++t) {
        const double emp = rng.uniform();
        const double rad_h = rng.uniform() * 0.5;
        const long long n = 10 + static_cast<long long>(rng.below(5000));
        const double delta = 0.01 + 0.9 * rng.uniform();
        const BoundReport general = generalization_bound(emp, rad_h, n, delta,
                                                         BoundVariant::General);
        const BoundReport classification = generalization_bound(emp, 2.0 * rad_h, n, delta,
                                                                BoundVariant::Classification);
        CHECK(general.total_bound == classification.total_bound);
    }
}

TEST_CASE("coverage on a small finite class is essentially one") {
    // members: bias-free linear thresholds at assorted angles (population
    // error analytic via the angle formula)
    std::vector<Hypothesis> members;
    Rng rng = Rng::stream(3, "coverage-members");
    for (int k = 0; k < 12; ++k) {
        Eigen::VectorXd w(2);
        w << rng.normal(), rng.normal();
        members.push_back(make_linear(w, OutputMode::SignThresholded));
    }
    const HypothesisClass cls = make_finite_class(members);
    const Generator gen =
        make_linear_threshold((Eigen::VectorXd(2) << 1.0, 0.5).finished(), 0.1, 7);

    const double delta = 0.1;
    const int trials = 500;
    const double coverage = bound_coverage(cls, gen, 12, delta, trials, 99);
    // binomial 3-sigma floor around 1 - delta; the bound is loose, so
    // coverage should in fact sit at 1
    const double floor = 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / trials);
    CHECK(coverage >= floor);
    CHECK(coverage >= 0.99);

    CHECK_THROWS_AS(bound_coverage(cls, gen, 12, delta, 50, 1), InputError);
}

TEST_CASE("vacuous-bound coverage is exactly one (all-labelings surrogate)") {
    // constants realize both labels on every point, so rad = 1 on n = 1 and
    // the bound exceeds 1: zero-one errors can never violate it
    const HypothesisClass constants = make_finite_class(
        {make_linear_with_bias(Eigen::VectorXd::Zero(2), 1.0, OutputMode::SignThresholded),
         make_linear_with_bias(Eigen::VectorXd::Zero(2), -1.0, OutputMode::SignThresholded)});
    const Generator gen =
        make_linear_threshold((Eigen::VectorXd(2) << 1.0, 0.0).finished(), 0.2, 8);
    CHECK(bound_coverage(constants, gen, 1, 0.1, 200, 11) == 1.0);
}

TEST_CASE("smaller delta gives a pointwise larger bound on the same trials") {
    Rng rng = Rng::stream(4, "delta-mono");
    for (int t = 0; t < 10; ++t) {
        const double emp = rng.uniform();
        const double rad = rng.uniform();
        const BoundReport loose = generalization_bound(emp, rad, 200, 0.5,
                                                       BoundVariant::Classification);
        const BoundReport tight = generalization_bound(emp, rad, 200, 0.01,
                                                       BoundVariant::Classification);
        CHECK(tight.total_bound > loose.total_bound);
    }
}

}  // TEST_SUITE

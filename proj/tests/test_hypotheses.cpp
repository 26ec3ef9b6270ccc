#include <doctest.h>

#include <cmath>

#include "genlab/errors.hpp"
#include "genlab/hypotheses.hpp"
#include "genlab/rng.hpp"

using namespace genlab;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_SUITE("hypotheses") {

TEST_CASE("linear predict: dot product and sign thresholding") {
    const Hypothesis real = make_linear(vec2(1.0, 2.0));
    CHECK(predict(real, vec2(3.0, 1.0)) == 5.0);

    const Hypothesis thresholded = make_linear(vec2(1.0, 0.0), OutputMode::SignThresholded);
    CHECK(predict(thresholded, vec2(-2.0, 7.0)) == -1.0);

    CHECK_THROWS_AS(predict(real, Eigen::VectorXd(Eigen::VectorXd::Ones(3))), InputError);
}

TEST_CASE("zero mlp outputs zero; sign tie maps to +1") {
    MlpArchitecture arch;
    arch.input_dim = 3;
    arch.hidden = {4};
    const Hypothesis zero = make_mlp(arch, Eigen::VectorXd::Zero(arch.param_count()));
    CHECK(predict(zero, Eigen::VectorXd(Eigen::VectorXd::Random(3))) == 0.0);

    const Hypothesis zero_sign =
        make_mlp(arch, Eigen::VectorXd::Zero(arch.param_count()), OutputMode::SignThresholded);
    CHECK(predict(zero_sign, Eigen::VectorXd(Eigen::VectorXd::Random(3))) == 1.0);
}

TEST_CASE("table predict: lookup by point identity, off-support is an error") {
    Eigen::MatrixXd pts(2, 2);
    pts << 1.0, 2.0, 3.0, 4.0;
    Eigen::VectorXd vals(2);
    vals << -1.0, 1.0;
    const Hypothesis table = make_table(pts, vals);
    CHECK(predict(table, vec2(1.0, 2.0)) == -1.0);
    CHECK(predict(table, vec2(3.0, 4.0)) == 1.0);
    CHECK_THROWS_AS(predict(table, vec2(5.0, 6.0)), InputError);
}

TEST_CASE("square loss values") {
    CHECK(loss(square_loss(), 1.0, 1.0) == 0.0);
    CHECK(loss(square_loss(), 0.0, 2.0) == 4.0);
}

TEST_CASE("zero-one loss identity (1 - sigma*f)/2, all four sign cases") {
    for (const double sigma : {-1.0, 1.0}) {
        for (const double f : {-1.0, 1.0}) {
            const double indicator = loss(zero_one_loss(), sigma, f);
            CHECK(indicator == (1.0 - sigma * f) / 2.0);
        }
    }
    CHECK(loss(zero_one_loss(), 1.0, -1.0) == 1.0);
    CHECK_THROWS_AS(loss(zero_one_loss(), 0.5, 1.0), InputError);
}

TEST_CASE("finite class: stable enumeration, empty rejected") {
    const Hypothesis h = make_linear(vec2(1.0, 1.0), OutputMode::SignThresholded);
    const Hypothesis neg = make_linear(vec2(-1.0, -1.0), OutputMode::SignThresholded);
    const HypothesisClass cls = make_finite_class({h, neg});
    CHECK(enumerate_members(cls).size() == 2);
    CHECK(enumerate_members(cls)[0].params == h.params);
    CHECK(enumerate_members(cls)[1].params == neg.params);

    CHECK_THROWS_AS(make_finite_class({}), ConfigError);
    CHECK_THROWS_AS(enumerate_members(make_ridge_class(2)), UnsupportedError);
}

TEST_CASE("param_count") {
    CHECK(param_count(make_ridge_class(10)) == 10);
    CHECK(param_count(make_ridge_class(10, true)) == 11);

    // (2*4+4) + (4*1+1), by direct summation over affine layers
    CHECK(param_count(make_mlp_class(2, {4})) == 17);

    // (256*64+64) + (64*64+64) + (64*1+1)
    int expected = 0;
    const int sizes[] = {256, 64, 64, 1};
    for (int l = 0; l + 1 < 4; ++l) expected += (sizes[l] + 1) * sizes[l + 1];
    CHECK(expected == 20673);
    CHECK(param_count(make_mlp_class(256, {64, 64})) == 20673);

    CHECK_THROWS_AS(param_count(make_finite_class({make_linear(vec2(1, 0))})),
                    UnsupportedError);
}

TEST_CASE("linear predict is positively homogeneous; sign invariant under scaling") {
    Rng rng = Rng::stream(5, "homog");
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd w(3), x(3);
        for (int i = 0; i < 3; ++i) {
            w(i) = rng.normal();
            x(i) = rng.normal();
        }
        const double a = std::exp(rng.normal());
        const Hypothesis h = make_linear(w);
        const Hypothesis ah = make_linear(a * w);
        CHECK(predict(ah, x) == doctest::Approx(a * predict(h, x)).epsilon(1e-12));

        const Hypothesis hs = make_linear(w, OutputMode::SignThresholded);
        const Hypothesis ahs = make_linear(a * w, OutputMode::SignThresholded);
        CHECK(predict(ahs, x) == predict(hs, x));
    }
}

TEST_CASE("mlp with zero hidden weights is constant in x") {
    MlpArchitecture arch;
    arch.input_dim = 4;
    arch.hidden = {5};
    Rng rng = Rng::stream(6, "zero-hidden");
    Eigen::VectorXd flat = Eigen::VectorXd::Zero(arch.param_count());
    // biases of the hidden layer and the whole output layer stay free
    for (int i = 4 * 5; i < arch.param_count(); ++i) flat(i) = rng.normal();
    const Hypothesis h = make_mlp(arch, flat);
    const double at_zero = predict(h, Eigen::VectorXd(Eigen::VectorXd::Zero(4)));
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x(i) = rng.normal();
        CHECK(predict(h, x) == doctest::Approx(at_zero).epsilon(1e-12));
    }
}

TEST_CASE("mlp batch forward agrees with single-point forward") {
    MlpArchitecture arch;
    arch.input_dim = 3;
    arch.hidden = {4, 2};
    Rng rng = Rng::stream(7, "fwd");
    Eigen::VectorXd flat(arch.param_count());
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = rng.normal();
    const Hypothesis h = make_mlp(arch, flat);

    Eigen::MatrixXd X(5, 3);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    const Eigen::VectorXd batch = predict(h, X);
    for (Eigen::Index i = 0; i < 5; ++i)
        CHECK(batch(i) == doctest::Approx(predict(h, Eigen::VectorXd(X.row(i).transpose())))
                              .epsilon(1e-12));
}

}  // TEST_SUITE

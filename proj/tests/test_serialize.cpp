#include <doctest.h>

#include <limits>
#include <sstream>

#include "genlab/errors.hpp"
#include "genlab/rng.hpp"
#include "genlab/serialize.hpp"
#include "genlab/svg.hpp"

using namespace genlab;

TEST_SUITE("serialize") {

TEST_CASE("generator json round trip") {
    const Generator gen = make_linear_threshold((Eigen::VectorXd(3) << 1, -2, 0.5).finished(),
                                                0.1, 77);
    const Generator back = generator_from_json(to_json(gen));
    CHECK(back.kind == gen.kind);
    CHECK(back.true_weights == gen.true_weights);
    CHECK(back.label_flip_prob == gen.label_flip_prob);
    CHECK(back.seed == gen.seed);

    const Generator grid = make_grid_image(16, 0.9, 0.05, 3);
    const Generator grid_back = generator_from_json(to_json(grid));
    CHECK(grid_back.feature_dim == 16);
    CHECK(grid_back.noise_sigma == 0.9);
}

TEST_CASE("hypothesis json round trip preserves predictions bit-exactly") {
    Rng rng = Rng::stream(1, "ser");

    Eigen::VectorXd w(3);
    for (int i = 0; i < 3; ++i) w(i) = rng.normal();
    const Hypothesis lin = make_linear_with_bias(w, rng.normal(), OutputMode::SignThresholded);
    const Hypothesis lin_back = hypothesis_from_json(to_json(lin));
    CHECK(lin_back.params == lin.params);
    CHECK(lin_back.bias == lin.bias);
    CHECK(lin_back.output_mode == lin.output_mode);

    MlpArchitecture arch;
    arch.input_dim = 4;
    arch.hidden = {5, 3};
    Eigen::VectorXd flat(arch.param_count());
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = rng.normal();
    const Hypothesis mlp = make_mlp(arch, flat);
    const Hypothesis mlp_back = hypothesis_from_json(to_json(mlp));
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x(i) = rng.normal();
    CHECK(predict(mlp_back, x) == predict(mlp, x));

    Eigen::MatrixXd pts(2, 2);
    pts << 0, 1, 2, 3;
    const Hypothesis table = make_table(pts, (Eigen::VectorXd(2) << -1, 1).finished());
    const Hypothesis table_back = hypothesis_from_json(to_json(table));
    CHECK(table_back.table_points == table.table_points);
    CHECK(table_back.table_values == table.table_values);
}

TEST_CASE("dataset csv round trip is bit-exact") {
    const Generator gen = make_linear_gaussian((Eigen::VectorXd(3) << 0.1, -2, 3).finished(),
                                               0.7, 5);
    const Dataset ds = generate(gen, 25, 9);
    const std::string csv = dataset_to_csv(ds);
    CHECK(csv.rfind("x1,x2,x3,y\n", 0) == 0);

    const Dataset back = dataset_from_csv_string(csv, false);
    CHECK(back.X == ds.X);
    CHECK(back.y == ds.y);
    // serializing again reproduces the same bytes
    CHECK(dataset_to_csv(back) == csv);

    CHECK_THROWS_AS(dataset_from_csv_string("x1,y\n", false), InputError);
    CHECK_THROWS_AS(dataset_from_csv_string("x1,y\n1.5,0.3\n", true), InputError);
}

TEST_CASE("csv writers carry the documented columns") {
    BVDecomposition bv;
    bv.bias_sq = 0.25;
    bv.variance = 0.5;
    bv.noise = 0.25;
    bv.sum = 1.0;
    bv.aesl_direct = 1.01;
    bv.aesl_stderr = 0.01;
    const std::string csv = bv_sweep_csv({{0.1, bv}});
    CHECK(csv.rfind("lambda,bias_sq,variance,noise,sum,aesl_direct,stderr\n", 0) == 0);
    CHECK(csv.find("0.1,0.25,0.5,0.25,1,1.01,0.01") != std::string::npos);

    CVResult res;
    res.lambda_grid = {0.1, 1.0};
    res.ahat_el = {0.5, 0.4};
    res.train_errors = {0.2, 0.3};
    res.r = 2;
    res.per_fold_errors.resize(2, 2);
    res.per_fold_errors << 0.45, 0.35, 0.55, 0.45;
    res.lambda_hat = 1.0;
    const std::string cv = cv_csv(res);
    CHECK(cv.rfind("lambda,ael_hat,train_error,fold_1,fold_2\n", 0) == 0);
}

TEST_CASE("complexity json carries a 20-bin histogram over the sigma draws") {
    ComplexityEstimate est;
    est.value = 0.5;
    est.stderr_ = 0.01;
    est.method = ComplexityMethod::MonteCarlo;
    est.n_sigma = 4;
    est.sup_solver = SupSolver::FitBased;
    est.restarts = 3;
    est.per_sigma = {-1.0, 0.0, 0.5, 1.0};
    const json j = to_json(est);
    REQUIRE(j.contains("correlation_histogram"));
    const auto bins = j["correlation_histogram"]["bins"].get<std::vector<int>>();
    REQUIRE(bins.size() == 20);
    int total = 0;
    for (const int b : bins) total += b;
    CHECK(total == 4);
    CHECK(j["restarts"] == 3);
}

TEST_CASE("bound summary flags vacuity") {
    const BoundReport vac = generalization_bound(0.0, 1.0, 100, 0.05,
                                                 BoundVariant::Classification);
    CHECK(bound_summary_line(vac).find("VACUOUS") != std::string::npos);
    const BoundReport fine = generalization_bound(0.05, 0.1, 10000, 0.05,
                                                  BoundVariant::Classification);
    CHECK(bound_summary_line(fine).find("VACUOUS") == std::string::npos);
}

TEST_CASE("svg line chart has one polyline per series and fixed viewBox") {
    const std::vector<double> x = {0.01, 0.1, 1.0, 10.0};
    const std::vector<SvgSeries> series = {
        {"train", "#d62728", {0.1, 0.2, 0.3, 0.4}},
        {"cv", "#1f77b4", {0.5, 0.3, 0.2, 0.6}},
    };
    const std::string svg = line_chart_svg("title", "lambda", x, series);
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == 2);
    CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);
    CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
}

TEST_CASE("fit trace and memorization curve csv writers") {
    const std::vector<TracePoint> trace = {
        {0, 0.5, 0.6},
        {1, 0.4, std::numeric_limits<double>::quiet_NaN()},
    };
    const std::string csv = trace_csv(trace);
    CHECK(csv.rfind("epoch,train_objective,validation_error\n", 0) == 0);
    CHECK(csv.find("0,0.5,0.6\n") != std::string::npos);
    CHECK(csv.find("1,0.4,\n") != std::string::npos);   // no validation split

    const std::string mem = memorization_csv({{65, 0.4}, {5281, 0.0}});
    CHECK(mem == "k,train_error\n65,0.4\n5281,0\n");
}

TEST_CASE("doubles serialize as shortest round-trip decimals") {
    CHECK(csv_field(0.1) == "0.1");
    CHECK(csv_field(1.0) == "1");
    CHECK(csv_field(0.30000000000000004) == "0.30000000000000004");
    CHECK(csv_field(-2.5e-7) == "-2.5e-07");
}

}  // TEST_SUITE

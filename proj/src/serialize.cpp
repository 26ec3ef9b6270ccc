#include "genlab/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "genlab/errors.hpp"
#include "genlab/fmt.hpp"

namespace genlab {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd from_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const char* generator_kind_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::LinearGaussianRegression: return "linear-gaussian-regression";
        case GeneratorKind::LinearThresholdClassification: return "linear-threshold-classification";
        case GeneratorKind::GridImageClassification: return "grid-image-classification";
    }
    return "?";
}

GeneratorKind generator_kind_from(const std::string& s) {
    if (s == "linear-gaussian-regression") return GeneratorKind::LinearGaussianRegression;
    if (s == "linear-threshold-classification") return GeneratorKind::LinearThresholdClassification;
    if (s == "grid-image-classification") return GeneratorKind::GridImageClassification;
    throw ConfigError("unknown generator kind: " + s);
}

}  // namespace

json to_json(const Generator& gen) {
    json j;
    j["kind"] = generator_kind_name(gen.kind);
    j["feature_dim"] = gen.feature_dim;
    if (gen.kind != GeneratorKind::GridImageClassification)
        j["true_weights"] = to_vec(gen.true_weights);
    j["noise_sigma"] = gen.noise_sigma;
    j["label_flip_prob"] = gen.label_flip_prob;
    j["seed"] = gen.seed;
    return j;
}

Generator generator_from_json(const json& j) {
    Generator gen;
    gen.kind = generator_kind_from(j.at("kind").get<std::string>());
    gen.feature_dim = j.at("feature_dim").get<int>();
    if (j.contains("true_weights"))
        gen.true_weights = from_vec(j["true_weights"].get<std::vector<double>>());
    gen.noise_sigma = j.value("noise_sigma", 0.0);
    gen.label_flip_prob = j.value("label_flip_prob", 0.0);
    gen.seed = j.value("seed", std::uint64_t{0});
    validate(gen);
    return gen;
}

namespace {

const char* activation_name(Activation a) { return a == Activation::Tanh ? "tanh" : "relu"; }

Activation activation_from(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    throw ConfigError("unknown activation: " + s);
}

const char* output_mode_name(OutputMode m) {
    return m == OutputMode::SignThresholded ? "sign-thresholded" : "real-valued";
}

OutputMode output_mode_from(const std::string& s) {
    if (s == "sign-thresholded") return OutputMode::SignThresholded;
    if (s == "real-valued") return OutputMode::RealValued;
    throw ConfigError("unknown output mode: " + s);
}

}  // namespace

json to_json(const Hypothesis& h) {
    json j;
    j["output_mode"] = output_mode_name(h.output_mode);
    switch (h.kind) {
        case HypothesisKind::Linear:
            j["kind"] = "linear";
            j["weights"] = to_vec(h.params);
            if (h.has_bias) j["bias"] = h.bias;
            break;
        case HypothesisKind::Mlp: {
            j["kind"] = "mlp";
            json arch;
            arch["input_dim"] = h.arch.input_dim;
            arch["hidden"] = h.arch.hidden;
            arch["activation"] = activation_name(h.arch.activation);
            j["architecture"] = arch;
            j["params"] = to_vec(h.params);
            break;
        }
        case HypothesisKind::Table: {
            j["kind"] = "table";
            std::vector<std::vector<double>> pts;
            for (Eigen::Index i = 0; i < h.table_points.rows(); ++i)
                pts.push_back(to_vec(h.table_points.row(i).transpose()));
            j["points"] = pts;
            j["values"] = to_vec(h.table_values);
            break;
        }
    }
    return j;
}

Hypothesis hypothesis_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const OutputMode mode = output_mode_from(j.value("output_mode", "real-valued"));
    if (kind == "linear") {
        const Eigen::VectorXd w = from_vec(j.at("weights").get<std::vector<double>>());
        if (j.contains("bias")) return make_linear_with_bias(w, j["bias"].get<double>(), mode);
        return make_linear(w, mode);
    }
    if (kind == "mlp") {
        const json& arch_j = j.at("architecture");
        MlpArchitecture arch;
        arch.input_dim = arch_j.at("input_dim").get<int>();
        arch.hidden = arch_j.value("hidden", std::vector<int>{});
        arch.activation = activation_from(arch_j.value("activation", "tanh"));
        return make_mlp(arch, from_vec(j.at("params").get<std::vector<double>>()), mode);
    }
    if (kind == "table") {
        const auto pts = j.at("points").get<std::vector<std::vector<double>>>();
        const auto vals = j.at("values").get<std::vector<double>>();
        if (pts.empty()) throw ConfigError("table hypothesis: empty support");
        Eigen::MatrixXd points(static_cast<Eigen::Index>(pts.size()),
                               static_cast<Eigen::Index>(pts.front().size()));
        for (std::size_t i = 0; i < pts.size(); ++i)
            points.row(static_cast<Eigen::Index>(i)) = from_vec(pts[i]).transpose();
        return make_table(points, from_vec(vals), mode);
    }
    throw ConfigError("unknown hypothesis kind: " + kind);
}

json to_json(const TrainerConfig& cfg) {
    json j;
    j["max_epochs"] = cfg.max_epochs;
    j["learning_rate"] = cfg.learning_rate;
    j["batch_size"] = cfg.batch_size;
    j["restarts"] = cfg.restarts;
    j["init_scale"] = cfg.init_scale;
    j["tolerance"] = cfg.tolerance;
    j["seed"] = cfg.seed;
    if (cfg.early_stopping) {
        j["early_stopping"] = {
            {"validation_fraction", cfg.early_stopping->validation_fraction},
            {"patience", cfg.early_stopping->patience},
        };
    }
    return j;
}

TrainerConfig trainer_from_json(const json& j) {
    TrainerConfig cfg;
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.init_scale = j.value("init_scale", cfg.init_scale);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("early_stopping")) {
        const json& es = j["early_stopping"];
        EarlyStopping stopping;
        stopping.validation_fraction = es.value("validation_fraction", 0.2);
        stopping.patience = es.value("patience", 10);
        cfg.early_stopping = stopping;
    }
    return cfg;
}

json to_json(const ComplexityEstimate& est) {
    json j;
    j["value"] = est.value;
    j["stderr"] = est.stderr_;
    j["method"] = est.method == ComplexityMethod::ExactEnumeration ? "exact-enumeration"
                                                                   : "monte-carlo";
    j["n_sigma"] = est.n_sigma;
    j["sup_solver"] = est.sup_solver == SupSolver::Enumeration ? "enumeration" : "fit-based";
    if (est.sup_solver == SupSolver::FitBased) j["restarts"] = est.restarts;

    // 20-bin histogram of the per-sigma achieved correlations over [-1, 1].
    if (!est.per_sigma.empty()) {
        std::vector<int> bins(20, 0);
        for (const double v : est.per_sigma) {
            int b = static_cast<int>(std::floor((v + 1.0) / 2.0 * 20.0));
            b = std::clamp(b, 0, 19);
            bins[static_cast<std::size_t>(b)] += 1;
        }
        j["correlation_histogram"] = {{"bins", bins}, {"lo", -1.0}, {"hi", 1.0}};
    }
    return j;
}

json to_json(const BoundReport& report) {
    json j;
    j["empirical_error"] = report.empirical_error;
    j["complexity_term"] = report.complexity_term;
    j["confidence_term"] = report.confidence_term;
    j["total_bound"] = report.total_bound;
    j["delta"] = report.delta;
    j["n"] = report.n;
    j["variant"] = report.variant == BoundVariant::General ? "general" : "classification";
    j["vacuous"] = report.vacuous;
    return j;
}

json to_json(const BVDecomposition& bv) {
    json j;
    j["bias_sq"] = bv.bias_sq;
    j["variance"] = bv.variance;
    j["noise"] = bv.noise;
    j["sum"] = bv.sum;
    j["aesl_direct"] = bv.aesl_direct;
    j["aesl_stderr"] = bv.aesl_stderr;
    j["sum_stderr"] = bv.sum_stderr;
    j["n_train_sets"] = bv.n_train_sets;
    j["n_eval_points"] = bv.n_eval_points;
    return j;
}

json to_json(const CVResult& res) {
    json j;
    j["lambda_grid"] = res.lambda_grid;
    j["ahat_el"] = res.ahat_el;
    j["train_errors"] = res.train_errors;
    j["lambda_hat"] = res.lambda_hat;
    j["r"] = res.r;
    std::vector<std::vector<double>> folds;
    for (Eigen::Index f = 0; f < res.per_fold_errors.rows(); ++f)
        folds.push_back(to_vec(res.per_fold_errors.row(f).transpose()));
    j["per_fold_errors"] = folds;
    return j;
}

json to_json(const RandomizationReport& report) {
    auto rows_json = [](const std::vector<ConditionRow>& rows) {
        json arr = json::array();
        for (const auto& row : rows) {
            arr.push_back({
                {"condition", condition_name(row.tag)},
                {"train_error", row.train_error},
                {"test_error", row.test_error},
                {"epochs", row.epochs},
                {"param_count", row.param_count},
                {"n", row.n},
                {"k_over_n", row.k_over_n},
            });
        }
        return arr;
    };
    json j;
    j["conditions"] = rows_json(report.rows);
    j["regularized_conditions"] = rows_json(report.regularized_rows);
    j["rad_estimate"] = to_json(report.rad_estimate);
    j["bound"] = to_json(report.bound);
    j["thresholds"] = {{"fact1_rad_min", report.thresholds.fact1_rad_min},
                       {"fact2_test_error_max", report.thresholds.fact2_test_error_max}};
    j["fact1_fired"] = report.fact1_fired;
    j["fact2_fired"] = report.fact2_fired;
    j["conclusion_fired"] = report.conclusion_fired;
    return j;
}

std::string bound_summary_line(const BoundReport& report) {
    std::ostringstream out;
    out << (report.variant == BoundVariant::General ? "general" : "classification")
        << " bound: err_P <= " << format_double(report.empirical_error) << " + "
        << format_double(report.complexity_term) << " + "
        << format_double(report.confidence_term) << " = "
        << format_double(report.total_bound) << " (delta=" << format_double(report.delta)
        << ", n=" << report.n << ")" << (report.vacuous ? " [VACUOUS: bound >= 1]" : "");
    return out.str();
}

std::string randomization_table(const RandomizationReport& report) {
    std::ostringstream out;
    auto print_rows = [&](const std::vector<ConditionRow>& rows) {
        for (const auto& row : rows) {
            out << "  " << std::left << std::setw(16) << condition_name(row.tag) << std::right
                << " train=" << format_double(row.train_error)
                << " test=" << format_double(row.test_error) << " epochs=" << row.epochs
                << " k=" << row.param_count << " n=" << row.n
                << " k/n=" << format_double(row.k_over_n) << "\n";
        }
    };
    out << "randomization suite (lambda=0, no early stopping)\n";
    print_rows(report.rows);
    out << "comparison (L2 penalty + early stopping)\n";
    print_rows(report.regularized_rows);
    out << "rad estimate: " << format_double(report.rad_estimate.value) << " +- "
        << format_double(report.rad_estimate.stderr_) << " ("
        << report.rad_estimate.n_sigma << " sigma draws, fit-based lower bound)\n";
    out << bound_summary_line(report.bound) << "\n";
    out << "fact1 (rad >= " << format_double(report.thresholds.fact1_rad_min)
        << "): " << (report.fact1_fired ? "FIRED" : "not fired") << "\n";
    out << "fact2 (true-label test error <= "
        << format_double(report.thresholds.fact2_test_error_max)
        << "): " << (report.fact2_fired ? "FIRED" : "not fired") << "\n";
    out << "conclusion (facts hold, bound vacuous): "
        << (report.conclusion_fired ? "FIRED" : "not fired") << "\n";
    return out.str();
}

std::string csv_field(double v) { return format_double(v); }

void dataset_to_csv(const Dataset& ds, std::ostream& out) {
    const Eigen::Index p = ds.feature_dim();
    for (Eigen::Index j = 0; j < p; ++j) out << "x" << (j + 1) << ",";
    out << "y\n";
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (Eigen::Index j = 0; j < p; ++j) out << format_double(ds.X(i, j)) << ",";
        out << format_double(ds.y(i)) << "\n";
    }
}

std::string dataset_to_csv(const Dataset& ds) {
    std::ostringstream out;
    dataset_to_csv(ds, out);
    return out.str();
}

Dataset dataset_from_csv(std::istream& in, bool classification) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("dataset csv: missing header");
    const std::size_t p = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        if (row.size() != p + 1) throw InputError("dataset csv: inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("dataset csv: no data rows");
    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    ds.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j)
            ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        ds.y(static_cast<Eigen::Index>(i)) = rows[i][p];
    }
    ds.classification = classification;
    if (classification)
        for (Eigen::Index i = 0; i < ds.y.size(); ++i)
            if (ds.y(i) != 1.0 && ds.y(i) != -1.0)
                throw InputError("dataset csv: classification labels must be +-1");
    ds.provenance.generator = "csv-import";
    return ds;
}

Dataset dataset_from_csv_string(const std::string& text, bool classification) {
    std::istringstream in(text);
    return dataset_from_csv(in, classification);
}

std::string bv_sweep_csv(const std::vector<std::pair<double, BVDecomposition>>& rows) {
    std::ostringstream out;
    out << "lambda,bias_sq,variance,noise,sum,aesl_direct,stderr\n";
    for (const auto& [lambda, bv] : rows) {
        out << format_double(lambda) << "," << format_double(bv.bias_sq) << ","
            << format_double(bv.variance) << "," << format_double(bv.noise) << ","
            << format_double(bv.sum) << "," << format_double(bv.aesl_direct) << ","
            << format_double(bv.aesl_stderr) << "\n";
    }
    return out.str();
}

std::string cv_csv(const CVResult& res) {
    std::ostringstream out;
    out << "lambda,ael_hat,train_error";
    for (int f = 0; f < res.r; ++f) out << ",fold_" << (f + 1);
    out << "\n";
    for (std::size_t l = 0; l < res.lambda_grid.size(); ++l) {
        out << format_double(res.lambda_grid[l]) << "," << format_double(res.ahat_el[l]) << ","
            << format_double(res.train_errors[l]);
        for (int f = 0; f < res.r; ++f)
            out << "," << format_double(res.per_fold_errors(f, static_cast<Eigen::Index>(l)));
        out << "\n";
    }
    return out.str();
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
    std::ostringstream out;
    out << "epoch,train_objective,validation_error\n";
    for (const auto& pt : trace) {
        out << pt.epoch << "," << format_double(pt.train_objective) << ",";
        if (std::isnan(pt.validation_error))
            out << "";
        else
            out << format_double(pt.validation_error);
        out << "\n";
    }
    return out.str();
}

std::string memorization_csv(const std::vector<std::pair<long long, double>>& rows) {
    std::ostringstream out;
    out << "k,train_error\n";
    for (const auto& [k, err] : rows) out << k << "," << format_double(err) << "\n";
    return out.str();
}

}  // namespace genlab

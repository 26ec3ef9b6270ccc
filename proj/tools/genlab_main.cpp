// genlab: desk-scale statistical-learning-theory experiments.
//
// Subcommands: rad, bv, cv, bound, randomization, vc. Each reads a strict
// JSON config, writes a manifest.json echoing the fully resolved config, and
// emits CSV/JSON/SVG results. Outputs are byte-reproducible from
// (config, seed) for any --threads value.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "genlab/errors.hpp"
#include "genlab/parallel.hpp"
#include "genlab/rng.hpp"
#include "genlab/serialize.hpp"
#include "genlab/svg.hpp"

namespace fs = std::filesystem;
using genlab::json;

namespace {

// ---------------------------------------------------------------------------
// Strict config plumbing
// ---------------------------------------------------------------------------

void require_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw genlab::ConfigError(what + " must be a JSON object");
}

void check_keys(const json& j, const std::string& what, const std::set<std::string>& allowed) {
    require_object(j, what);
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw genlab::ConfigError("unknown key '" + key + "' in " + what);
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw genlab::ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw genlab::ConfigError("config parse error in " + path + ": " + e.what());
    }
    require_object(j, "config");
    return j;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> formats;   // comma separated
    std::optional<int> threads;
};

struct Resolved {
    json config;   // full config with defaults applied; becomes the manifest
    std::uint64_t seed = 0;
    fs::path out;
    std::set<std::string> formats;
    int threads = 1;
};

// Precedence: command-line flag > config file > GENLAB_SEED (seed only) > default.
Resolved resolve_common(const CommonFlags& flags, json config, const std::string& command) {
    Resolved r;

    if (config.contains("command")) {
        const std::string recorded = config["command"].get<std::string>();
        if (recorded != command)
            throw genlab::ConfigError("config was written for command '" + recorded +
                                      "', not '" + command + "'");
    }

    if (flags.seed) {
        r.seed = *flags.seed;
    } else if (config.contains("seed")) {
        r.seed = config["seed"].get<std::uint64_t>();
    } else if (const char* env = std::getenv("GENLAB_SEED")) {
        try {
            r.seed = std::stoull(env);
        } catch (...) {
            throw genlab::ConfigError("GENLAB_SEED is not a valid unsigned integer");
        }
    }

    std::string out = "genlab-out";
    if (config.contains("out")) out = config["out"].get<std::string>();
    if (flags.out) out = *flags.out;
    r.out = out;

    std::vector<std::string> fmt_list = {"csv", "json", "svg"};
    if (config.contains("formats")) fmt_list = config["formats"].get<std::vector<std::string>>();
    if (flags.formats) {
        fmt_list.clear();
        std::stringstream ss(*flags.formats);
        std::string item;
        while (std::getline(ss, item, ',')) fmt_list.push_back(item);
    }
    for (const auto& f : fmt_list) {
        if (f != "csv" && f != "json" && f != "svg")
            throw genlab::ConfigError("unknown output format: " + f);
        r.formats.insert(f);
    }

    r.threads = 1;
    if (config.contains("threads")) r.threads = config["threads"].get<int>();
    if (flags.threads) r.threads = *flags.threads;
    if (r.threads < 1) throw genlab::ConfigError("threads must be >= 1");

    r.config = std::move(config);
    r.config["command"] = command;
    r.config["seed"] = r.seed;
    r.config["out"] = r.out.string();
    r.config["formats"] = std::vector<std::string>(r.formats.begin(), r.formats.end());
    r.config["threads"] = r.threads;
    genlab::set_max_threads(r.threads);
    return r;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw genlab::ConfigError("cannot write output file: " + path.string());
    out << content;
}

void write_manifest(const Resolved& r) {
    fs::create_directories(r.out);
    write_file(r.out / "manifest.json", r.config.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Descriptor parsing
// ---------------------------------------------------------------------------

genlab::Generator parse_generator(const json& j) {
    check_keys(j, "generator",
               {"kind", "feature_dim", "true_weights", "noise_sigma", "label_flip_prob", "seed"});
    return genlab::generator_from_json(j);
}

genlab::HypothesisClass parse_class(const json& j) {
    require_object(j, "class");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
        check_keys(j, "class", {"kind", "members"});
        std::vector<genlab::Hypothesis> members;
        for (const auto& m : j.at("members")) members.push_back(genlab::hypothesis_from_json(m));
        return genlab::make_finite_class(std::move(members));
    }
    if (kind == "linear-threshold" || kind == "ridge-linear" || kind == "lasso-linear") {
        check_keys(j, "class", {"kind", "feature_dim", "bias", "lambda", "norm_bound"});
        const int p = j.at("feature_dim").get<int>();
        const bool bias = j.value("bias", false);
        genlab::HypothesisClass cls =
            kind == "linear-threshold" ? genlab::make_linear_threshold_class(p, bias)
            : kind == "ridge-linear"   ? genlab::make_ridge_class(p, bias)
                                       : genlab::make_lasso_class(p, bias);
        if (j.contains("lambda")) cls.penalty_lambda = j["lambda"].get<double>();
        if (j.contains("norm_bound")) cls.norm_bound_c = j["norm_bound"].get<double>();
        return cls;
    }
    if (kind == "mlp") {
        check_keys(j, "class", {"kind", "input_dim", "hidden", "activation", "lambda"});
        genlab::HypothesisClass cls = genlab::make_mlp_class(
            j.at("input_dim").get<int>(), j.value("hidden", std::vector<int>{}),
            j.value("activation", "tanh") == "relu" ? genlab::Activation::Relu
                                                    : genlab::Activation::Tanh);
        if (j.contains("lambda")) cls.penalty_lambda = j["lambda"].get<double>();
        return cls;
    }
    throw genlab::ConfigError("unknown class kind: " + kind);
}

genlab::TrainerConfig parse_trainer(const json& j, std::uint64_t default_seed) {
    check_keys(j, "trainer",
               {"max_epochs", "learning_rate", "batch_size", "restarts", "init_scale",
                "early_stopping", "tolerance", "seed"});
    if (j.contains("early_stopping"))
        check_keys(j["early_stopping"], "trainer.early_stopping",
                   {"validation_fraction", "patience"});
    genlab::TrainerConfig cfg = genlab::trainer_from_json(j);
    if (!j.contains("seed")) cfg.seed = default_seed;
    return cfg;
}

// data: {"generator": {...}, "n": N} or {"csv": path, "classification": bool}
genlab::Dataset parse_data(const json& j, std::uint64_t seed) {
    check_keys(j, "data", {"generator", "n", "csv", "classification"});
    if (j.contains("generator")) {
        if (!j.contains("n")) throw genlab::ConfigError("data: missing sample count 'n'");
        return genlab::generate(parse_generator(j["generator"]), j["n"].get<int>(), seed);
    }
    if (j.contains("csv")) {
        std::ifstream in(j["csv"].get<std::string>());
        if (!in)
            throw genlab::ConfigError("data: cannot open csv file " +
                                      j["csv"].get<std::string>());
        return genlab::dataset_from_csv(in, j.value("classification", false));
    }
    throw genlab::ConfigError("data: need either a generator or a csv path");
}

std::string histogram_csv(const genlab::ComplexityEstimate& est) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    std::vector<int> bins(20, 0);
    for (const double v : est.per_sigma) {
        int b = static_cast<int>(std::floor((v + 1.0) / 2.0 * 20.0));
        if (b < 0) b = 0;
        if (b > 19) b = 19;
        bins[static_cast<std::size_t>(b)] += 1;
    }
    for (int b = 0; b < 20; ++b) {
        out << genlab::csv_field(-1.0 + 0.1 * b) << "," << genlab::csv_field(-1.0 + 0.1 * (b + 1))
            << "," << bins[static_cast<std::size_t>(b)] << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_rad(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "class", "data", "method",
                "n_sigma", "trainer"});
    Resolved r = resolve_common(flags, std::move(config), "rad");

    const genlab::HypothesisClass cls = parse_class(r.config.at("class"));
    const genlab::Dataset data =
        parse_data(r.config.at("data"), genlab::mix64(r.seed ^ genlab::fnv1a64("rad-data")));
    const std::string method = r.config.value("method", "mc");
    r.config["method"] = method;

    genlab::ComplexityEstimate est;
    if (method == "exact") {
        est = genlab::rademacher_exact(cls, data);
    } else if (method == "mc") {
        const int n_sigma = r.config.value("n_sigma", 1000);
        const genlab::TrainerConfig trainer =
            parse_trainer(r.config.value("trainer", json::object()), r.seed);
        r.config["n_sigma"] = n_sigma;
        r.config["trainer"] = genlab::to_json(trainer);
        est = genlab::rademacher_mc(cls, data, n_sigma, trainer, r.seed);
    } else {
        throw genlab::ConfigError("rad: method must be 'exact' or 'mc'");
    }

    write_manifest(r);
    if (r.formats.count("json"))
        write_file(r.out / "complexity.json", genlab::to_json(est).dump(2) + "\n");
    if (r.formats.count("csv")) write_file(r.out / "histogram.csv", histogram_csv(est));
    std::cout << "rad = " << genlab::csv_field(est.value) << " +- "
              << genlab::csv_field(est.stderr_) << " (" << method << ")\n";
    return 0;
}

int cmd_bv(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "generator", "class", "n",
                "lambda", "lambda_grid", "n_train_sets", "n_eval_points", "trainer"});
    Resolved r = resolve_common(flags, std::move(config), "bv");

    const genlab::Generator gen = parse_generator(r.config.at("generator"));
    const genlab::HypothesisClass cls = parse_class(r.config.at("class"));
    const int n = r.config.at("n").get<int>();
    const int n_train_sets = r.config.value("n_train_sets", 200);
    const int n_eval_points = r.config.value("n_eval_points", 256);
    const genlab::TrainerConfig trainer =
        parse_trainer(r.config.value("trainer", json::object()), r.seed);

    std::vector<double> grid;
    if (r.config.contains("lambda_grid"))
        grid = r.config["lambda_grid"].get<std::vector<double>>();
    else
        grid.push_back(r.config.value("lambda", 0.0));
    r.config["n_train_sets"] = n_train_sets;
    r.config["n_eval_points"] = n_eval_points;
    r.config["trainer"] = genlab::to_json(trainer);
    r.config["lambda_grid"] = grid;
    r.config.erase("lambda");

    const auto rows =
        genlab::aesl_sweep(cls, gen, n, grid, trainer, n_train_sets, n_eval_points, r.seed);

    write_manifest(r);
    if (r.formats.count("csv")) write_file(r.out / "bv.csv", genlab::bv_sweep_csv(rows));
    if (r.formats.count("json")) {
        json arr = json::array();
        for (const auto& [lambda, bv] : rows) {
            json row = genlab::to_json(bv);
            row["lambda"] = lambda;
            arr.push_back(row);
        }
        write_file(r.out / "bv.json", arr.dump(2) + "\n");
    }
    std::cout << "bv: " << rows.size() << " lambda value(s), noise = "
              << genlab::csv_field(rows.front().second.noise) << "\n";
    return 0;
}

int cmd_cv(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "data", "class", "loss",
                "lambda_grid", "folds", "holdout_fraction", "trainer"});
    Resolved r = resolve_common(flags, std::move(config), "cv");

    const genlab::Dataset data =
        parse_data(r.config.at("data"), genlab::mix64(r.seed ^ genlab::fnv1a64("cv-data")));
    const genlab::HypothesisClass cls = parse_class(r.config.at("class"));
    const std::string loss_name = r.config.value("loss", "square");
    if (loss_name != "square" && loss_name != "zero-one")
        throw genlab::ConfigError("cv: loss must be 'square' or 'zero-one'");
    const genlab::LossFn fn =
        loss_name == "square" ? genlab::square_loss() : genlab::zero_one_loss();
    const auto grid = r.config.at("lambda_grid").get<std::vector<double>>();
    const int folds = r.config.value("folds", 4);
    const double holdout = r.config.value("holdout_fraction", 0.25);
    const genlab::TrainerConfig trainer =
        parse_trainer(r.config.value("trainer", json::object()), r.seed);
    r.config["loss"] = loss_name;
    r.config["folds"] = folds;
    r.config["holdout_fraction"] = holdout;
    r.config["trainer"] = genlab::to_json(trainer);

    const genlab::CVResult res = genlab::cv_sweep(data, cls, fn, grid, folds, trainer,
                                                  genlab::mix64(r.seed ^ genlab::fnv1a64("cv")),
                                                  holdout);

    write_manifest(r);
    if (r.formats.count("csv")) write_file(r.out / "cv.csv", genlab::cv_csv(res));
    if (r.formats.count("json")) write_file(r.out / "cv.json", genlab::to_json(res).dump(2) + "\n");
    if (r.formats.count("svg")) {
        const std::vector<genlab::SvgSeries> series = {
            {"train error", "#d62728", res.train_errors},
            {"cv error", "#1f77b4", res.ahat_el},
        };
        write_file(r.out / "cv.svg",
                   genlab::line_chart_svg("cross-validated error vs regularization", "lambda",
                                          res.lambda_grid, series));
    }
    std::cout << "cv: lambda_hat = " << genlab::csv_field(res.lambda_hat) << "\n";
    return 0;
}

int cmd_bound(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "empirical_error", "rad", "n",
                "delta", "variant", "coverage", "from_cv_class"});
    Resolved r = resolve_common(flags, std::move(config), "bound");

    if (r.config.contains("coverage")) {
        const json& cov = r.config["coverage"];
        check_keys(cov, "coverage", {"class", "generator", "n", "delta", "trials"});
        const genlab::HypothesisClass cls = parse_class(cov.at("class"));
        const genlab::Generator gen = parse_generator(cov.at("generator"));
        r.config["coverage"]["delta"] = cov.value("delta", 0.05);
        r.config["coverage"]["trials"] = cov.value("trials", 500);
        write_manifest(r);
        const double coverage =
            genlab::bound_coverage(cls, gen, cov.at("n").get<int>(),
                                   cov.value("delta", 0.05), cov.value("trials", 500), r.seed);
        if (r.formats.count("json")) {
            json out;
            out["coverage"] = coverage;
            out["delta"] = cov.value("delta", 0.05);
            out["trials"] = cov.value("trials", 500);
            write_file(r.out / "coverage.json", out.dump(2) + "\n");
        }
        std::cout << "coverage = " << genlab::csv_field(coverage) << "\n";
        return 0;
    }

    const double emp = r.config.at("empirical_error").get<double>();
    const double rad = r.config.at("rad").get<double>();
    const long long n = r.config.at("n").get<long long>();
    const double delta = r.config.value("delta", 0.05);
    const std::string variant_name = r.config.value("variant", "classification");
    if (variant_name != "general" && variant_name != "classification")
        throw genlab::ConfigError("bound: variant must be 'general' or 'classification'");
    const genlab::BoundVariant variant = variant_name == "general"
                                             ? genlab::BoundVariant::General
                                             : genlab::BoundVariant::Classification;
    r.config["delta"] = delta;
    r.config["variant"] = variant_name;

    const genlab::BoundReport report = genlab::generalization_bound(emp, rad, n, delta, variant);
    write_manifest(r);
    if (r.formats.count("json"))
        write_file(r.out / "bound.json", genlab::to_json(report).dump(2) + "\n");
    std::cout << genlab::bound_summary_line(report) << "\n";
    // The bound holds for a class fixed before the sample was seen; warn
    // rather than endorse when the caller plugs in a CV-selected class.
    if (r.config.value("from_cv_class", false))
        std::cout << "note: this bound is stated for a hypothesis class fixed in advance; "
                     "a cross-validation-selected class was chosen using the same sample, "
                     "so the guarantee does not directly apply to it.\n";
    return 0;
}

int cmd_randomization(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "generator", "class", "n",
                "trainer", "delta", "n_sigma", "test_n", "reg_lambda"});
    Resolved r = resolve_common(flags, std::move(config), "randomization");

    const genlab::Generator gen = parse_generator(r.config.at("generator"));
    const genlab::HypothesisClass cls = parse_class(r.config.at("class"));
    const int n = r.config.at("n").get<int>();
    const genlab::TrainerConfig trainer =
        parse_trainer(r.config.value("trainer", json::object()), r.seed);
    const double delta = r.config.value("delta", 0.05);
    const int n_sigma = r.config.value("n_sigma", 64);
    const int test_n = r.config.value("test_n", 2048);
    const double reg_lambda = r.config.value("reg_lambda", 1e-3);
    r.config["trainer"] = genlab::to_json(trainer);
    r.config["delta"] = delta;
    r.config["n_sigma"] = n_sigma;
    r.config["test_n"] = test_n;
    r.config["reg_lambda"] = reg_lambda;

    const genlab::RandomizationReport report = genlab::run_randomization_suite(
        cls, gen, n, trainer, delta, r.seed, n_sigma, test_n, reg_lambda);

    write_manifest(r);
    if (r.formats.count("json"))
        write_file(r.out / "randomization.json", genlab::to_json(report).dump(2) + "\n");
    const std::string table = genlab::randomization_table(report);
    write_file(r.out / "randomization.txt", table);
    std::cout << table;
    return report.conclusion_fired ? 0 : 4;
}

int cmd_vc(const CommonFlags& flags) {
    json config = flags.config_path.empty() ? json::object() : load_config_file(flags.config_path);
    check_keys(config, "config",
               {"command", "seed", "out", "formats", "threads", "class", "points", "d_max",
                "bound_n"});
    Resolved r = resolve_common(flags, std::move(config), "vc");

    const genlab::HypothesisClass cls = parse_class(r.config.at("class"));
    const int d_max = r.config.value("d_max", 10);
    r.config["d_max"] = d_max;

    std::vector<Eigen::VectorXd> points;
    const json& pts = r.config.at("points");
    if (pts.is_object()) {
        check_keys(pts, "points", {"generator", "n"});
        const genlab::Dataset data =
            genlab::generate(parse_generator(pts.at("generator")), pts.at("n").get<int>(),
                             genlab::mix64(r.seed ^ genlab::fnv1a64("vc-points")));
        for (Eigen::Index i = 0; i < data.size(); ++i)
            points.push_back(data.X.row(i).transpose());
    } else {
        for (const auto& row : pts) {
            const auto vals = row.get<std::vector<double>>();
            points.push_back(
                Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
        }
    }

    const int d = genlab::vc_dimension(cls, points, d_max);

    write_manifest(r);
    json out;
    out["vc_dimension"] = d;
    out["candidate_points"] = points.size();
    out["d_max"] = d_max;
    if (r.config.contains("bound_n")) {
        json bounds = json::array();
        for (const auto& n : r.config["bound_n"].get<std::vector<long long>>())
            bounds.push_back({{"n", n}, {"vc_rad_bound", d >= 1 ? genlab::vc_rad_bound(d, n) : 0.0}});
        out["bounds"] = bounds;
    }
    if (r.formats.count("json")) write_file(r.out / "vc.json", out.dump(2) + "\n");
    std::cout << "vc_dimension = " << d << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genlab: executable statistical-learning-theory experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config_path, "JSON config file");
        sub->add_option("--seed", flags.seed, "master seed (overrides config and GENLAB_SEED)");
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--format", flags.formats, "comma-separated outputs: csv,json,svg");
        sub->add_option("--threads", flags.threads, "worker thread cap");
    };

    CLI::App* rad = app.add_subcommand("rad", "empirical Rademacher complexity");
    CLI::App* bv = app.add_subcommand("bv", "bias-variance-noise decomposition");
    CLI::App* cv = app.add_subcommand("cv", "cross-validated lambda sweep (U-curve)");
    CLI::App* bound = app.add_subcommand("bound", "generalization bound report / coverage");
    CLI::App* randomization =
        app.add_subcommand("randomization", "random-label memorization suite");
    CLI::App* vc = app.add_subcommand("vc", "VC dimension by shattering search");
    for (CLI::App* sub : {rad, bv, cv, bound, randomization, vc}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share the config-error exit code; --help stays 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (rad->parsed()) return cmd_rad(flags);
        if (bv->parsed()) return cmd_bv(flags);
        if (cv->parsed()) return cmd_cv(flags);
        if (bound->parsed()) return cmd_bound(flags);
        if (randomization->parsed()) return cmd_randomization(flags);
        if (vc->parsed()) return cmd_vc(flags);
    } catch (const genlab::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const genlab::GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const genlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const genlab::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const genlab::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

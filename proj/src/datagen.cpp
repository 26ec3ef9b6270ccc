#include "genlab/datagen.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "genlab/errors.hpp"
#include "genlab/fmt.hpp"
#include "genlab/rng.hpp"

namespace genlab {

namespace {

double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

const char* kind_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::LinearGaussianRegression: return "linear-gaussian-regression";
        case GeneratorKind::LinearThresholdClassification: return "linear-threshold-classification";
        case GeneratorKind::GridImageClassification: return "grid-image-classification";
    }
    return "?";
}

std::string describe(const Generator& gen) {
    std::ostringstream out;
    out << kind_name(gen.kind) << "(p=" << gen.feature_dim;
    if (gen.kind == GeneratorKind::LinearGaussianRegression ||
        gen.kind == GeneratorKind::GridImageClassification) {
        out << ",sigma=" << format_double(gen.noise_sigma);
    }
    if (gen.is_classification()) out << ",flip=" << format_double(gen.label_flip_prob);
    out << ",seed=" << gen.seed << ")";
    return out.str();
}

// Effective stream seed: both the generator's own seed and the call seed enter.
std::uint64_t combine_seed(const Generator& gen, std::uint64_t seed) {
    return mix64(gen.seed) ^ seed;
}

void draw_sample(const Generator& gen, Rng& rng, Eigen::VectorXd& x_out, double& y_out,
                 const Eigen::VectorXd* blob) {
    const int p = gen.feature_dim;
    switch (gen.kind) {
        case GeneratorKind::LinearGaussianRegression: {
            for (int j = 0; j < p; ++j) x_out(j) = rng.normal();
            y_out = x_out.dot(gen.true_weights);
            if (gen.noise_sigma > 0.0) y_out += gen.noise_sigma * rng.normal();
            break;
        }
        case GeneratorKind::LinearThresholdClassification: {
            for (int j = 0; j < p; ++j) x_out(j) = rng.normal();
            y_out = sign_plus(x_out.dot(gen.true_weights));
            if (gen.label_flip_prob > 0.0 && rng.bernoulli(gen.label_flip_prob)) y_out = -y_out;
            break;
        }
        case GeneratorKind::GridImageClassification: {
            const double cls = rng.pick_sign();
            for (int j = 0; j < p; ++j)
                x_out(j) = cls * (*blob)(j) + gen.noise_sigma * rng.normal();
            y_out = cls;
            if (gen.label_flip_prob > 0.0 && rng.bernoulli(gen.label_flip_prob)) y_out = -y_out;
            break;
        }
    }
}

}  // namespace

Generator make_linear_gaussian(const Eigen::VectorXd& true_weights, double noise_sigma,
                               std::uint64_t seed) {
    Generator gen;
    gen.kind = GeneratorKind::LinearGaussianRegression;
    gen.feature_dim = static_cast<int>(true_weights.size());
    gen.true_weights = true_weights;
    gen.noise_sigma = noise_sigma;
    gen.seed = seed;
    validate(gen);
    return gen;
}

Generator make_linear_threshold(const Eigen::VectorXd& true_weights, double label_flip_prob,
                                std::uint64_t seed) {
    Generator gen;
    gen.kind = GeneratorKind::LinearThresholdClassification;
    gen.feature_dim = static_cast<int>(true_weights.size());
    gen.true_weights = true_weights;
    gen.label_flip_prob = label_flip_prob;
    gen.seed = seed;
    validate(gen);
    return gen;
}

Generator make_grid_image(int feature_dim, double noise_sigma, double label_flip_prob,
                          std::uint64_t seed) {
    Generator gen;
    gen.kind = GeneratorKind::GridImageClassification;
    gen.feature_dim = feature_dim;
    gen.noise_sigma = noise_sigma;
    gen.label_flip_prob = label_flip_prob;
    gen.seed = seed;
    validate(gen);
    return gen;
}

void validate(const Generator& gen) {
    if (gen.feature_dim <= 0) throw ConfigError("generator: feature_dim must be positive");
    if (gen.noise_sigma < 0.0) throw ConfigError("generator: noise_sigma must be nonnegative");
    if (gen.label_flip_prob < 0.0 || gen.label_flip_prob >= 0.5)
        throw ConfigError("generator: label_flip_prob must lie in [0, 0.5)");
    switch (gen.kind) {
        case GeneratorKind::LinearGaussianRegression:
        case GeneratorKind::LinearThresholdClassification:
            if (gen.true_weights.size() != gen.feature_dim)
                throw ConfigError("generator: true_weights length must equal feature_dim");
            break;
        case GeneratorKind::GridImageClassification: {
            const int g = static_cast<int>(std::round(std::sqrt(double(gen.feature_dim))));
            if (g * g != gen.feature_dim)
                throw ConfigError("generator: grid-image feature_dim must be a perfect square");
            break;
        }
    }
}

Eigen::VectorXd grid_blob_pattern(int feature_dim) {
    const int g = static_cast<int>(std::round(std::sqrt(double(feature_dim))));
    if (g * g != feature_dim)
        throw ConfigError("grid_blob_pattern: feature_dim must be a perfect square");
    Eigen::VectorXd mu(feature_dim);
    const double cx_pos = (g - 1) * 0.25, cy_pos = (g - 1) * 0.25;
    const double cx_neg = (g - 1) * 0.75, cy_neg = (g - 1) * 0.75;
    const double width = std::max(1.0, g / 6.0);
    for (int r = 0; r < g; ++r) {
        for (int c = 0; c < g; ++c) {
            const double dp = ((r - cy_pos) * (r - cy_pos) + (c - cx_pos) * (c - cx_pos));
            const double dn = ((r - cy_neg) * (r - cy_neg) + (c - cx_neg) * (c - cx_neg));
            mu(r * g + c) = std::exp(-dp / (2.0 * width * width)) -
                            std::exp(-dn / (2.0 * width * width));
        }
    }
    // ||mu|| = 2 so the Bayes error at pixel noise sigma is Phi(-2/sigma).
    mu *= 2.0 / mu.norm();
    return mu;
}

Dataset subset(const Dataset& ds, const std::vector<int>& indices) {
    Dataset out;
    out.X.resize(static_cast<Eigen::Index>(indices.size()), ds.X.cols());
    out.y.resize(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(indices[i]);
        out.y(static_cast<Eigen::Index>(i)) = ds.y(indices[i]);
    }
    out.classification = ds.classification;
    out.provenance = ds.provenance;
    out.provenance.transforms.push_back("subset(n=" + std::to_string(indices.size()) + ")");
    return out;
}

Dataset generate(const Generator& gen, int n, std::uint64_t seed) {
    validate(gen);
    if (n < 1) throw ConfigError("generate: n must be >= 1");

    Eigen::VectorXd blob;
    const Eigen::VectorXd* blob_ptr = nullptr;
    if (gen.kind == GeneratorKind::GridImageClassification) {
        blob = grid_blob_pattern(gen.feature_dim);
        blob_ptr = &blob;
    }

    Dataset ds;
    ds.X.resize(n, gen.feature_dim);
    ds.y.resize(n);
    ds.classification = gen.is_classification();
    const std::uint64_t s = combine_seed(gen, seed);
    Eigen::VectorXd x(gen.feature_dim);
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::stream(s, "datagen/sample", static_cast<std::uint64_t>(i));
        double yi = 0.0;
        draw_sample(gen, rng, x, yi, blob_ptr);
        ds.X.row(i) = x.transpose();
        ds.y(i) = yi;
    }
    ds.provenance.generator = describe(gen);
    ds.provenance.seed = seed;
    return ds;
}

double conditional_mean(const Generator& gen, const Eigen::VectorXd& x) {
    validate(gen);
    if (x.size() != gen.feature_dim)
        throw InputError("conditional_mean: x dimension does not match feature_dim");
    switch (gen.kind) {
        case GeneratorKind::LinearGaussianRegression:
            return gen.true_weights.dot(x);
        case GeneratorKind::LinearThresholdClassification:
            return (1.0 - 2.0 * gen.label_flip_prob) * sign_plus(gen.true_weights.dot(x));
        case GeneratorKind::GridImageClassification: {
            // Equal-prior Gaussian mixture at +-mu: E[y0|x] = tanh(x.mu / sigma^2).
            const Eigen::VectorXd mu = grid_blob_pattern(gen.feature_dim);
            const double s2 = gen.noise_sigma * gen.noise_sigma;
            if (s2 == 0.0) return (1.0 - 2.0 * gen.label_flip_prob) * sign_plus(mu.dot(x));
            return (1.0 - 2.0 * gen.label_flip_prob) * std::tanh(mu.dot(x) / s2);
        }
    }
    throw ConfigError("conditional_mean: unknown generator kind");
}

Dataset randomize_labels(const Dataset& ds, std::uint64_t seed) {
    if (!ds.classification)
        throw UnsupportedError("randomize_labels: dataset is not a classification dataset");
    Dataset out = ds;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        Rng rng = Rng::stream(seed, "randomize-labels", static_cast<std::uint64_t>(i));
        out.y(i) = rng.pick_sign();
    }
    out.provenance.transforms.push_back("randomize-labels(seed=" + std::to_string(seed) + ")");
    return out;
}

Dataset randomize_features(const Dataset& ds, std::uint64_t seed) {
    Dataset out = ds;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        Rng rng = Rng::stream(seed, "randomize-features", static_cast<std::uint64_t>(i));
        for (Eigen::Index j = 0; j < out.feature_dim(); ++j) out.X(i, j) = rng.normal();
    }
    out.provenance.transforms.push_back("randomize-features(seed=" + std::to_string(seed) + ")");
    return out;
}

std::vector<std::vector<int>> FoldSplit::fold_indices() const {
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        folds[static_cast<std::size_t>(fold_of[i])].push_back(static_cast<int>(i));
    return folds;
}

std::vector<int> FoldSplit::complement_indices(int fold) const {
    std::vector<int> out;
    out.reserve(fold_of.size());
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(static_cast<int>(i));
    return out;
}

FoldSplit split_folds(int n, int r, std::uint64_t seed) {
    if (r < 2 || r > n) throw ConfigError("split_folds: need 2 <= r <= n");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::stream(seed, "fold-shuffle");
    rng.shuffle(order);
    FoldSplit split;
    split.r = r;
    split.fold_of.assign(static_cast<std::size_t>(n), 0);
    // Round-robin deal over the shuffled order keeps fold sizes within one.
    for (int pos = 0; pos < n; ++pos)
        split.fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos % r;
    return split;
}

}  // namespace genlab

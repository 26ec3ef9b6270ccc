#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace genlab {

enum class GeneratorKind {
    LinearGaussianRegression,
    LinearThresholdClassification,
    GridImageClassification,
};

/**
 * A fully known synthetic distribution over (x, y). Because the distribution
 * is known by construction, population quantities (conditional mean, noise
 * level, expected losses) are computable exactly or by fresh sampling.
 *
 * Kinds:
 *  - linear-gaussian-regression:      x ~ N(0, I_p), y = w*.x + sigma * eps
 *  - linear-threshold-classification: x ~ N(0, I_p), y = sign(w*.x), flipped
 *                                     with probability label_flip_prob
 *  - grid-image-classification:       p = g*g pixels, x = y0 * mu + sigma * eps
 *                                     where mu is a fixed two-blob pattern with
 *                                     ||mu|| = 2, y0 uniform in {-1,+1}, label
 *                                     flipped with probability label_flip_prob
 */
struct Generator {
    GeneratorKind kind = GeneratorKind::LinearGaussianRegression;
    int feature_dim = 0;
    Eigen::VectorXd true_weights;   // linear kinds only
    double noise_sigma = 0.0;       // regression noise / grid pixel noise
    double label_flip_prob = 0.0;   // classification kinds, in [0, 0.5)
    std::uint64_t seed = 0;

    bool is_classification() const { return kind != GeneratorKind::LinearGaussianRegression; }
};

Generator make_linear_gaussian(const Eigen::VectorXd& true_weights, double noise_sigma,
                               std::uint64_t seed = 0);
Generator make_linear_threshold(const Eigen::VectorXd& true_weights, double label_flip_prob,
                                std::uint64_t seed = 0);
Generator make_grid_image(int feature_dim, double noise_sigma = 1.0, double label_flip_prob = 0.0,
                          std::uint64_t seed = 0);

/// Throws ConfigError if the generator parameters are invalid.
void validate(const Generator& gen);

/// The fixed grid-image class pattern mu (||mu|| = 2): a positive blob in the
/// upper-left quadrant mirrored by a negative blob in the lower-right.
Eigen::VectorXd grid_blob_pattern(int feature_dim);

struct LabeledSample {
    Eigen::VectorXd x;
    double y = 0.0;
};

struct Provenance {
    std::string generator;                 // serialized descriptor of the source
    std::uint64_t seed = 0;                // seed passed to generate()
    std::vector<std::string> transforms;   // append-only transform history
};

/**
 * A finite sample S of n labeled observations, stored dense: row i of X is
 * sample i's feature vector. Immutable after construction; transforms return
 * new datasets with extended provenance.
 */
struct Dataset {
    Eigen::MatrixXd X;   // n x p
    Eigen::VectorXd y;   // n
    bool classification = false;   // labels constrained to {-1, +1}
    Provenance provenance;

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index feature_dim() const { return X.cols(); }
    LabeledSample sample(Eigen::Index i) const { return {X.row(i).transpose(), y(i)}; }
};

/// Restrict a dataset to the given row indices (provenance is carried over).
Dataset subset(const Dataset& ds, const std::vector<int>& indices);

/// n i.i.d. draws. Bit-identical for identical (gen, n, seed).
Dataset generate(const Generator& gen, int n, std::uint64_t seed);

/// h(x) = E[y | x]; exact, per generator kind.
double conditional_mean(const Generator& gen, const Eigen::VectorXd& x);

/// Replace labels by independent uniform signs; features untouched.
Dataset randomize_labels(const Dataset& ds, std::uint64_t seed);

/// Replace features by i.i.d. standard normal entries; labels untouched.
Dataset randomize_features(const Dataset& ds, std::uint64_t seed);

/**
 * Balanced random partition into r folds (sizes differ by at most one).
 * Fold j is the held-out test set T_j; its complement is the train set S_j.
 */
struct FoldSplit {
    std::vector<int> fold_of;   // sample index -> fold index in [0, r)
    int r = 0;

    std::vector<std::vector<int>> fold_indices() const;
    std::vector<int> complement_indices(int fold) const;
};

FoldSplit split_folds(int n, int r, std::uint64_t seed);

inline FoldSplit split_folds(const Dataset& ds, int r, std::uint64_t seed) {
    return split_folds(static_cast<int>(ds.size()), r, seed);
}

}  // namespace genlab

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace genlab {

/// Global sign convention: sign(0) = +1.
inline double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

enum class HypothesisKind { Table, Linear, Mlp };
enum class OutputMode { RealValued, SignThresholded };
enum class Activation { Tanh, Relu };

struct MlpArchitecture {
    int input_dim = 0;
    std::vector<int> hidden;   // hidden widths; output width is always 1
    Activation activation = Activation::Tanh;

    /// [input_dim, hidden..., 1]
    std::vector<int> layer_sizes() const;
    /// Trainable scalars: sum over layers of (fan_in + 1) * fan_out.
    int param_count() const;
};

/**
 * A trained (or constructed) member f of a hypothesis class. Prediction is
 * deterministic; sign-thresholded hypotheses map ties at 0 to +1.
 *
 *  - table:  values on an explicit point list; off-support queries are errors
 *  - linear: w.x (+ b when has_bias)
 *  - mlp:    forward pass; params flat, per layer W row-major then b
 */
struct Hypothesis {
    HypothesisKind kind = HypothesisKind::Linear;
    OutputMode output_mode = OutputMode::RealValued;

    Eigen::VectorXd params;   // linear: w; mlp: flat parameter vector
    double bias = 0.0;        // linear only
    bool has_bias = false;    // linear only

    MlpArchitecture arch;     // mlp only

    Eigen::MatrixXd table_points;   // table only, m x p
    Eigen::VectorXd table_values;   // table only, m
};

Hypothesis make_linear(const Eigen::VectorXd& w, OutputMode mode = OutputMode::RealValued);
Hypothesis make_linear_with_bias(const Eigen::VectorXd& w, double b,
                                 OutputMode mode = OutputMode::RealValued);
Hypothesis make_table(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                      OutputMode mode = OutputMode::RealValued);
Hypothesis make_mlp(const MlpArchitecture& arch, const Eigen::VectorXd& flat_params,
                    OutputMode mode = OutputMode::RealValued);

double predict(const Hypothesis& h, const Eigen::VectorXd& x);
/// Batch prediction, one row of X per sample.
Eigen::VectorXd predict(const Hypothesis& h, const Eigen::MatrixXd& X);

enum class LossKind { Square, ZeroOne };

struct LossFn {
    LossKind kind = LossKind::Square;
};

inline LossFn square_loss() { return {LossKind::Square}; }
inline LossFn zero_one_loss() { return {LossKind::ZeroOne}; }

/// square: (y - yhat)^2; zero-one: 1 on sign mismatch (inputs must be +-1).
double loss(const LossFn& fn, double y, double yhat);

enum class ClassKind { Finite, LinearThreshold, RidgeLinear, LassoLinear, Mlp };

/**
 * The hypothesis class F the learner searches. Parametric kinds are described
 * by their architecture/dimension; the finite kind lists its members
 * explicitly (enabling exact sup and argmin by enumeration).
 *
 * The optional constraint fields describe the regularized class F_lambda; the
 * fit operations take lambda explicitly.
 */
struct HypothesisClass {
    ClassKind kind = ClassKind::RidgeLinear;
    int feature_dim = 0;
    std::vector<Hypothesis> members;   // finite kind only, nonempty
    MlpArchitecture arch;              // mlp kind only
    bool linear_has_bias = false;      // linear kinds

    std::optional<double> norm_bound_c;
    std::optional<double> penalty_lambda;
};

HypothesisClass make_finite_class(std::vector<Hypothesis> members);
HypothesisClass make_linear_threshold_class(int feature_dim, bool with_bias = false);
HypothesisClass make_ridge_class(int feature_dim, bool with_bias = false);
HypothesisClass make_lasso_class(int feature_dim, bool with_bias = false);
HypothesisClass make_mlp_class(int input_dim, std::vector<int> hidden,
                               Activation activation = Activation::Tanh);

/// All members of a finite class, in stable construction order.
const std::vector<Hypothesis>& enumerate_members(const HypothesisClass& cls);

/// Number of trainable scalars of a parametric class.
int param_count(const HypothesisClass& cls);

/// Penalty norm order implied by the class kind (lasso: 1, otherwise 2).
int penalty_order(const HypothesisClass& cls);

// MLP primitives shared by the trainer and the sup-correlation solver.

/// Forward pass over a batch; returns the real-valued network output.
Eigen::VectorXd mlp_forward(const MlpArchitecture& arch, const Eigen::VectorXd& flat,
                            const Eigen::MatrixXd& X);

/**
 * Mean-square objective (1/n)||f(X) - targets||^2 + lambda * ||W||^2 (biases
 * excluded from the penalty) and its gradient via backpropagation.
 */
double mlp_objective_gradient(const MlpArchitecture& arch, const Eigen::VectorXd& flat,
                              const Eigen::MatrixXd& X, const Eigen::VectorXd& targets,
                              double lambda, Eigen::VectorXd& grad);

/// Squared L2 norm of the weight entries (biases excluded).
double mlp_weight_sq_norm(const MlpArchitecture& arch, const Eigen::VectorXd& flat);

class Rng;

/// Per-parameter uniform(-s, s) init; s defaults to 1/sqrt(fan_in) per layer
/// when init_scale is 0.
Eigen::VectorXd mlp_init_params(const MlpArchitecture& arch, double init_scale, Rng& rng);

}  // namespace genlab

#include "genlab/hypotheses.hpp"

#include <cmath>

#include "genlab/errors.hpp"
#include "genlab/rng.hpp"

namespace genlab {

std::vector<int> MlpArchitecture::layer_sizes() const {
    std::vector<int> sizes;
    sizes.push_back(input_dim);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(1);
    return sizes;
}

int MlpArchitecture::param_count() const {
    const auto sizes = layer_sizes();
    int k = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
        k += (sizes[l] + 1) * sizes[l + 1];
    return k;
}

Hypothesis make_linear(const Eigen::VectorXd& w, OutputMode mode) {
    Hypothesis h;
    h.kind = HypothesisKind::Linear;
    h.output_mode = mode;
    h.params = w;
    return h;
}

Hypothesis make_linear_with_bias(const Eigen::VectorXd& w, double b, OutputMode mode) {
    Hypothesis h = make_linear(w, mode);
    h.bias = b;
    h.has_bias = true;
    return h;
}

Hypothesis make_table(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                      OutputMode mode) {
    if (points.rows() != values.size())
        throw ConfigError("make_table: point and value counts differ");
    if (points.rows() == 0) throw ConfigError("make_table: empty support");
    Hypothesis h;
    h.kind = HypothesisKind::Table;
    h.output_mode = mode;
    h.table_points = points;
    h.table_values = values;
    return h;
}

Hypothesis make_mlp(const MlpArchitecture& arch, const Eigen::VectorXd& flat, OutputMode mode) {
    if (flat.size() != arch.param_count())
        throw ConfigError("make_mlp: flat parameter length does not match architecture");
    Hypothesis h;
    h.kind = HypothesisKind::Mlp;
    h.output_mode = mode;
    h.arch = arch;
    h.params = flat;
    return h;
}

namespace {

double table_lookup(const Hypothesis& h, const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < h.table_points.rows(); ++i) {
        if (h.table_points.row(i).transpose() == x) return h.table_values(i);
    }
    throw InputError("predict: table hypothesis queried off-support");
}

double apply_mode(const Hypothesis& h, double v) {
    return h.output_mode == OutputMode::SignThresholded ? sign_plus(v) : v;
}

}  // namespace

double predict(const Hypothesis& h, const Eigen::VectorXd& x) {
    switch (h.kind) {
        case HypothesisKind::Linear:
            if (x.size() != h.params.size())
                throw InputError("predict: x dimension does not match weights");
            return apply_mode(h, h.params.dot(x) + (h.has_bias ? h.bias : 0.0));
        case HypothesisKind::Table:
            if (x.size() != h.table_points.cols())
                throw InputError("predict: x dimension does not match table support");
            return apply_mode(h, table_lookup(h, x));
        case HypothesisKind::Mlp: {
            if (x.size() != h.arch.input_dim)
                throw InputError("predict: x dimension does not match mlp input");
            const Eigen::VectorXd out = mlp_forward(h.arch, h.params, x.transpose());
            return apply_mode(h, out(0));
        }
    }
    throw InputError("predict: unknown hypothesis kind");
}

Eigen::VectorXd predict(const Hypothesis& h, const Eigen::MatrixXd& X) {
    switch (h.kind) {
        case HypothesisKind::Linear: {
            if (X.cols() != h.params.size())
                throw InputError("predict: X dimension does not match weights");
            Eigen::VectorXd out = X * h.params;
            if (h.has_bias) out.array() += h.bias;
            if (h.output_mode == OutputMode::SignThresholded)
                out = out.unaryExpr([](double v) { return sign_plus(v); });
            return out;
        }
        case HypothesisKind::Mlp: {
            if (X.cols() != h.arch.input_dim)
                throw InputError("predict: X dimension does not match mlp input");
            Eigen::VectorXd out = mlp_forward(h.arch, h.params, X);
            if (h.output_mode == OutputMode::SignThresholded)
                out = out.unaryExpr([](double v) { return sign_plus(v); });
            return out;
        }
        case HypothesisKind::Table: {
            Eigen::VectorXd out(X.rows());
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                out(i) = predict(h, Eigen::VectorXd(X.row(i).transpose()));
            return out;
        }
    }
    throw InputError("predict: unknown hypothesis kind");
}

double loss(const LossFn& fn, double y, double yhat) {
    switch (fn.kind) {
        case LossKind::Square:
            return (y - yhat) * (y - yhat);
        case LossKind::ZeroOne:
            if ((y != 1.0 && y != -1.0) || (yhat != 1.0 && yhat != -1.0))
                throw InputError("loss: zero-one loss requires labels in {-1,+1}");
            // Equals (1 - y*yhat)/2.
            return y == yhat ? 0.0 : 1.0;
    }
    throw InputError("loss: unknown loss kind");
}

HypothesisClass make_finite_class(std::vector<Hypothesis> members) {
    if (members.empty()) throw ConfigError("finite class must have at least one member");
    HypothesisClass cls;
    cls.kind = ClassKind::Finite;
    cls.members = std::move(members);
    const Hypothesis& first = cls.members.front();
    cls.feature_dim = first.kind == HypothesisKind::Table
                          ? static_cast<int>(first.table_points.cols())
                          : (first.kind == HypothesisKind::Mlp
                                 ? first.arch.input_dim
                                 : static_cast<int>(first.params.size()));
    return cls;
}

HypothesisClass make_linear_threshold_class(int feature_dim, bool with_bias) {
    HypothesisClass cls;
    cls.kind = ClassKind::LinearThreshold;
    cls.feature_dim = feature_dim;
    cls.linear_has_bias = with_bias;
    return cls;
}

HypothesisClass make_ridge_class(int feature_dim, bool with_bias) {
    HypothesisClass cls;
    cls.kind = ClassKind::RidgeLinear;
    cls.feature_dim = feature_dim;
    cls.linear_has_bias = with_bias;
    return cls;
}

HypothesisClass make_lasso_class(int feature_dim, bool with_bias) {
    HypothesisClass cls;
    cls.kind = ClassKind::LassoLinear;
    cls.feature_dim = feature_dim;
    cls.linear_has_bias = with_bias;
    return cls;
}

HypothesisClass make_mlp_class(int input_dim, std::vector<int> hidden, Activation activation) {
    HypothesisClass cls;
    cls.kind = ClassKind::Mlp;
    cls.feature_dim = input_dim;
    cls.arch.input_dim = input_dim;
    cls.arch.hidden = std::move(hidden);
    cls.arch.activation = activation;
    return cls;
}

const std::vector<Hypothesis>& enumerate_members(const HypothesisClass& cls) {
    if (cls.kind != ClassKind::Finite)
        throw UnsupportedError("enumerate_members: class is not finite");
    return cls.members;
}

int param_count(const HypothesisClass& cls) {
    switch (cls.kind) {
        case ClassKind::Finite:
            throw UnsupportedError("param_count: finite classes are not parametric");
        case ClassKind::LinearThreshold:
        case ClassKind::RidgeLinear:
        case ClassKind::LassoLinear:
            return cls.feature_dim + (cls.linear_has_bias ? 1 : 0);
        case ClassKind::Mlp:
            return cls.arch.param_count();
    }
    throw UnsupportedError("param_count: unknown class kind");
}

int penalty_order(const HypothesisClass& cls) {
    return cls.kind == ClassKind::LassoLinear ? 1 : 2;
}

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Tanh) return z.array().tanh();
    return z.array().max(0.0);
}

Eigen::MatrixXd activate_grad(const Eigen::MatrixXd& a, const Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Tanh) return 1.0 - a.array().square();
    return (z.array() > 0.0).cast<double>();
}

struct LayerView {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> W;
    Eigen::Map<const Eigen::VectorXd> b;
};

LayerView layer_view(const Eigen::VectorXd& flat, int offset, int in, int out) {
    return {
        {flat.data() + offset, out, in},
        {flat.data() + offset + in * out, out},
    };
}

}  // namespace

Eigen::VectorXd mlp_forward(const MlpArchitecture& arch, const Eigen::VectorXd& flat,
                            const Eigen::MatrixXd& X) {
    const auto sizes = arch.layer_sizes();
    Eigen::MatrixXd a = X;
    int offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto [W, b] = layer_view(flat, offset, sizes[l], sizes[l + 1]);
        offset += (sizes[l] + 1) * sizes[l + 1];
        Eigen::MatrixXd z = a * W.transpose();
        z.rowwise() += b.transpose();
        const bool last = (l + 2 == sizes.size());
        a = last ? z : activate(z, arch.activation);
    }
    return a.col(0);
}

double mlp_objective_gradient(const MlpArchitecture& arch, const Eigen::VectorXd& flat,
                              const Eigen::MatrixXd& X, const Eigen::VectorXd& targets,
                              double lambda, Eigen::VectorXd& grad) {
    const auto sizes = arch.layer_sizes();
    const std::size_t layers = sizes.size() - 1;
    const double n = static_cast<double>(X.rows());

    // Forward, keeping activations (and pre-activations for relu).
    std::vector<Eigen::MatrixXd> acts(layers + 1);
    std::vector<Eigen::MatrixXd> zs(layers);
    acts[0] = X;
    std::vector<int> offsets(layers);
    int offset = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        offsets[l] = offset;
        const auto [W, b] = layer_view(flat, offset, sizes[l], sizes[l + 1]);
        offset += (sizes[l] + 1) * sizes[l + 1];
        zs[l] = acts[l] * W.transpose();
        zs[l].rowwise() += b.transpose();
        acts[l + 1] = (l + 1 == layers) ? zs[l] : activate(zs[l], arch.activation);
    }

    const Eigen::VectorXd residual = acts[layers].col(0) - targets;
    double objective = residual.squaredNorm() / n;

    grad.setZero(flat.size());
    // delta = d objective / d z for the current layer.
    Eigen::MatrixXd delta = (2.0 / n) * residual;
    for (std::size_t l = layers; l-- > 0;) {
        const auto [W, b] = layer_view(flat, offsets[l], sizes[l], sizes[l + 1]);
        const int in = sizes[l], out = sizes[l + 1];
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gW(
            grad.data() + offsets[l], out, in);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + offsets[l] + in * out, out);
        gW = delta.transpose() * acts[l];
        gb = delta.colwise().sum();
        if (l > 0) {
            delta = (delta * W).cwiseProduct(activate_grad(acts[l], zs[l - 1], arch.activation));
        }
    }

    if (lambda > 0.0) {
        objective += lambda * mlp_weight_sq_norm(arch, flat);
        int off = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            const int nw = sizes[l] * sizes[l + 1];
            grad.segment(off, nw) += 2.0 * lambda * flat.segment(off, nw);
            off += nw + sizes[l + 1];
        }
    }
    return objective;
}

double mlp_weight_sq_norm(const MlpArchitecture& arch, const Eigen::VectorXd& flat) {
    const auto sizes = arch.layer_sizes();
    double sq = 0.0;
    int off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int nw = sizes[l] * sizes[l + 1];
        sq += flat.segment(off, nw).squaredNorm();
        off += nw + sizes[l + 1];
    }
    return sq;
}

Eigen::VectorXd mlp_init_params(const MlpArchitecture& arch, double init_scale, Rng& rng) {
    const auto sizes = arch.layer_sizes();
    Eigen::VectorXd flat(arch.param_count());
    int off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const double scale = init_scale > 0.0 ? init_scale : 1.0 / std::sqrt(double(sizes[l]));
        const int count = (sizes[l] + 1) * sizes[l + 1];
        for (int i = 0; i < count; ++i) flat(off + i) = rng.uniform(-scale, scale);
        off += count;
    }
    return flat;
}

}  // namespace genlab

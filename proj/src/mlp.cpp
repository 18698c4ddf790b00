#include "ecoml/mlp.hpp"

#include <cmath>
#include <string>

#include "ecoml/random.hpp"

namespace ecoml {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

MlpModel MlpModel::zeros(std::size_t p, std::size_t q, std::size_t c) {
    const auto pp = static_cast<Eigen::Index>(p);
    const auto qq = static_cast<Eigen::Index>(q);
    const auto cc = static_cast<Eigen::Index>(c);
    return {Eigen::MatrixXd::Zero(qq, pp), Eigen::VectorXd::Zero(qq), Eigen::MatrixXd::Zero(cc, qq),
            Eigen::VectorXd::Zero(cc)};
}

std::size_t MlpModel::parameter_count() const {
    return static_cast<std::size_t>(hidden_weights.size() + hidden_bias.size() + output_weights.size() +
                                    output_bias.size());
}

Eigen::VectorXd MlpModel::flatten() const {
    Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index o = 0;
    auto put = [&](const auto& block) {
        flat.segment(o, block.size()) = Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
        o += block.size();
    };
    put(hidden_weights);
    put(hidden_bias);
    put(output_weights);
    put(output_bias);
    return flat;
}

void MlpModel::assign(const Eigen::VectorXd& flat) {
    if (static_cast<std::size_t>(flat.size()) != parameter_count()) throw ModelError("parameter vector has wrong size");
    Eigen::Index o = 0;
    auto take = [&](auto& block) {
        Eigen::Map<Eigen::VectorXd>(block.data(), block.size()) = flat.segment(o, block.size());
        o += block.size();
    };
    take(hidden_weights);
    take(hidden_bias);
    take(output_weights);
    take(output_bias);
}

namespace {

constexpr int kMaxRateHalvings = 60;

Eigen::VectorXd hidden_activations(const MlpModel& model, const Eigen::VectorXd& x) {
    return (model.hidden_weights * x + model.hidden_bias).unaryExpr([](double v) { return sigmoid(v); });
}

void check_batch(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets) {
    if (static_cast<std::size_t>(x.cols()) != model.p()) throw ModelError("input width does not match the network");
    if (targets.rows() != x.rows() || static_cast<std::size_t>(targets.cols()) != model.c()) {
        throw ModelError("target matrix shape does not match the network");
    }
}

}  // namespace

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p()) {
        throw ModelError("network expects " + std::to_string(model.p()) + " inputs, got " + std::to_string(x.size()));
    }
    return model.output_weights * hidden_activations(model, x) + model.output_bias;
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, std::size_t c) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < labels.size(); ++i) t(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    return t;
}

namespace {

struct BatchPass {
    Eigen::MatrixXd hidden;  // n x q activations
    Eigen::MatrixXd error;   // n x c output minus target
};

BatchPass batch_forward(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets) {
    BatchPass pass;
    pass.hidden = ((x * model.hidden_weights.transpose()).rowwise() + model.hidden_bias.transpose())
                      .unaryExpr([](double v) { return sigmoid(v); });
    pass.error = ((pass.hidden * model.output_weights.transpose()).rowwise() + model.output_bias.transpose()) - targets;
    return pass;
}

}  // namespace

double mlp_sse(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets) {
    check_batch(model, x, targets);
    return 0.5 * batch_forward(model, x, targets).error.squaredNorm();
}

Eigen::VectorXd mlp_gradient(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets) {
    check_batch(model, x, targets);
    const BatchPass pass = batch_forward(model, x, targets);
    MlpModel g = MlpModel::zeros(model.p(), model.q(), model.c());
    g.output_weights = pass.error.transpose() * pass.hidden;
    g.output_bias = pass.error.colwise().sum().transpose();
    const Eigen::MatrixXd delta =
        ((pass.error * model.output_weights).array() * pass.hidden.array() * (1.0 - pass.hidden.array())).matrix();
    g.hidden_weights = delta.transpose() * x;
    g.hidden_bias = delta.colwise().sum().transpose();
    return g.flatten();
}

MlpModel init_mlp(std::size_t p, std::size_t q, std::size_t c, double init_scale, std::uint64_t seed) {
    MlpModel m = MlpModel::zeros(p, q, c);
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-init_scale, init_scale);
    Eigen::VectorXd flat(static_cast<Eigen::Index>(m.parameter_count()));
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = init_scale > 0.0 ? u(rng) : 0.0;
    m.assign(flat);
    return m;
}

std::pair<MlpModel, TrainTrace> fit_mlp(const Dataset& ds, const MlpConfig& config) {
    if (config.hidden_units < 1) throw ModelError("network needs at least one hidden unit");
    if (!(config.learning_rate >= 0.0) || !(config.init_scale >= 0.0)) {
        throw ModelError("learning rate and init scale must be nonnegative");
    }
    MlpModel model = init_mlp(ds.p(), config.hidden_units, ds.c(), config.init_scale, config.seed);
    const Eigen::MatrixXd targets = one_hot(ds.labels(), ds.c());
    const Eigen::MatrixXd& x = ds.features();

    TrainTrace trace;
    Eigen::VectorXd params = model.flatten();
    double rate = config.learning_rate;
    double previous = mlp_sse(model, x, targets);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const Eigen::VectorXd grad = mlp_gradient(model, x, targets);
        Eigen::VectorXd candidate = params - rate * grad;
        model.assign(candidate);
        double sse = mlp_sse(model, x, targets);
        // A step that raises the error is retried at half the rate; the
        // reduced rate is kept for later epochs.
        for (int halving = 0; halving < kMaxRateHalvings && !(sse <= previous); ++halving) {
            rate /= 2.0;
            candidate = params - rate * grad;
            model.assign(candidate);
            sse = mlp_sse(model, x, targets);
        }
        if (!std::isfinite(sse)) {
            throw ModelError("network training: non-finite error at epoch " + std::to_string(epoch));
        }
        params = std::move(candidate);
        trace.sse.push_back(sse);
        trace.steps = epoch;
        if (previous - sse < config.min_improvement) break;
        previous = sse;
    }
    return {std::move(model), std::move(trace)};
}

int predict_mlp(const MlpModel& model, const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = forward(model, x);
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < y.size(); ++k) {
        if (y(k) > y(best)) best = k;
    }
    return static_cast<int>(best);
}

}  // namespace ecoml

#include "ecoml/logistic.hpp"

#include <cmath>
#include <string>

namespace ecoml {

namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd a(x.rows(), x.cols() + 1);
    a.col(0).setOnes();
    a.rightCols(x.cols()) = x;
    return a;
}

// Row-wise log-softmax of the n x c score matrix.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& scores) {
    Eigen::MatrixXd out(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const double m = scores.row(i).maxCoeff();
        const double lse = m + std::log((scores.row(i).array() - m).exp().sum());
        out.row(i) = scores.row(i).array() - lse;
    }
    return out;
}

void check_shapes(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x, const std::vector<int>& y) {
    if (w.cols() != x.cols() + 1) throw ModelError("weight matrix does not match the feature count");
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw ModelError("label count does not match row count");
    for (int k : y) {
        if (k < 0 || k >= w.rows()) throw ModelError("label out of range for the weight matrix");
    }
}

double loss_on(const Eigen::MatrixXd& w, const Eigen::MatrixXd& xa, const std::vector<int>& y) {
    const Eigen::MatrixXd lp = log_softmax(xa * w.transpose());
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s -= lp(static_cast<Eigen::Index>(i), y[i]);
    return s / static_cast<double>(y.size());
}

Eigen::MatrixXd gradient_on(const Eigen::MatrixXd& w, const Eigen::MatrixXd& xa, const std::vector<int>& y) {
    Eigen::MatrixXd resid = log_softmax(xa * w.transpose()).array().exp().matrix();
    for (std::size_t i = 0; i < y.size(); ++i) resid(static_cast<Eigen::Index>(i), y[i]) -= 1.0;
    Eigen::MatrixXd g = resid.transpose() * xa / static_cast<double>(y.size());
    g.row(g.rows() - 1).setZero();
    return g;
}

}  // namespace

double logistic_loss(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& x, const std::vector<int>& y) {
    check_shapes(weights, x, y);
    return loss_on(weights, with_intercept(x), y);
}

Eigen::MatrixXd logistic_gradient(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& x, const std::vector<int>& y) {
    check_shapes(weights, x, y);
    return gradient_on(weights, with_intercept(x), y);
}

LogisticModel fit_logistic(const Dataset& ds, const LogisticConfig& config) {
    if (ds.n() < ds.c()) throw ModelError("logistic regression needs at least as many rows as classes");
    if (!(config.learning_rate >= 0.0)) throw ModelError("learning rate must be nonnegative");

    const Eigen::MatrixXd xa = with_intercept(ds.features());
    const auto& y = ds.labels();
    LogisticModel m;
    m.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.c()), xa.cols());

    double loss = loss_on(m.weights, xa, y);
    m.loss_history.push_back(loss);
    for (std::size_t it = 1; it <= config.max_iter; ++it) {
        m.weights -= config.learning_rate * gradient_on(m.weights, xa, y);
        const double next = loss_on(m.weights, xa, y);
        if (!std::isfinite(next)) {
            throw ModelError("logistic regression: non-finite loss at iteration " + std::to_string(it));
        }
        m.loss_history.push_back(next);
        m.iterations = it;
        const double improvement = loss - next;
        loss = next;
        if (improvement < config.tolerance) break;
    }
    m.final_loss = loss;
    return m;
}

namespace {

Eigen::VectorXd class_scores(const LogisticModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p()) {
        throw ModelError("logistic model expects " + std::to_string(model.p()) + " features, got " +
                         std::to_string(x.size()));
    }
    return model.weights.col(0) + model.weights.rightCols(x.size()) * x;
}

}  // namespace

Eigen::VectorXd predict_logistic_proba(const LogisticModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd s = class_scores(model, x);
    s.array() -= s.maxCoeff();
    s = s.array().exp();
    return s / s.sum();
}

int predict_logistic(const LogisticModel& model, const Eigen::VectorXd& x) {
    const Eigen::VectorXd s = class_scores(model, x);
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < s.size(); ++k) {
        if (s(k) > s(best)) best = k;
    }
    return static_cast<int>(best);
}

double logistic_log_odds(const LogisticModel& model, const Eigen::VectorXd& x) {
    if (model.c() != 2) throw ModelError("log-odds is defined for two-class models only");
    const Eigen::VectorXd s = class_scores(model, x);
    return s(1) - s(0);
}

}  // namespace ecoml

#include "ecoml/naive_bayes.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ecoml {

NaiveBayesModel fit_naive_bayes(const Dataset& ds) {
    const auto counts = ds.class_counts();
    for (std::size_t j = 0; j < ds.c(); ++j) {
        if (counts[j] == 0) {
            throw ModelError("naive Bayes: class \"" + ds.class_names()[j] + "\" has no training rows");
        }
    }
    const auto c = static_cast<Eigen::Index>(ds.c());
    const auto p = static_cast<Eigen::Index>(ds.p());
    const auto& x = ds.features();

    NaiveBayesModel m;
    m.means = Eigen::MatrixXd::Zero(c, p);
    m.variances = Eigen::MatrixXd::Zero(c, p);
    for (std::size_t i = 0; i < ds.n(); ++i) m.means.row(ds.label(i)) += x.row(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < c; ++j) m.means.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const int j = ds.label(i);
        m.variances.row(j).array() += (x.row(static_cast<Eigen::Index>(i)) - m.means.row(j)).array().square();
    }
    for (Eigen::Index j = 0; j < c; ++j) {
        m.variances.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
    }

    // Floor tied to the largest global feature variance, so a class with a
    // single row or a constant feature still has a proper density.
    double max_var = 0.0;
    for (Eigen::Index f = 0; f < p; ++f) {
        const double mu = x.col(f).mean();
        max_var = std::max(max_var, (x.col(f).array() - mu).square().mean());
    }
    m.variance_floor = kNbVarianceFloorScale * (max_var + 1e-12);
    m.variances = m.variances.cwiseMax(m.variance_floor);

    const double n = static_cast<double>(ds.n());
    for (auto k : counts) m.priors.push_back(static_cast<double>(k) / n);
    return m;
}

Eigen::VectorXd nb_log_joint(const NaiveBayesModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p()) {
        throw ModelError("naive Bayes expects " + std::to_string(model.p()) + " features, got " +
                         std::to_string(x.size()));
    }
    const auto c = static_cast<Eigen::Index>(model.c());
    Eigen::VectorXd lj(c);
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    for (Eigen::Index j = 0; j < c; ++j) {
        double s = std::log(model.priors[static_cast<std::size_t>(j)]);
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double v = model.variances(j, k);
            const double d = x(k) - model.means(j, k);
            s += -0.5 * (log_2pi + std::log(v) + d * d / v);
        }
        lj(j) = s;
    }
    return lj;
}

Eigen::VectorXd nb_posterior(const NaiveBayesModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd lj = nb_log_joint(model, x);
    lj.array() -= lj.maxCoeff();
    lj = lj.array().exp();
    return lj / lj.sum();
}

int predict_nb(const NaiveBayesModel& model, const Eigen::VectorXd& x) {
    const Eigen::VectorXd lj = nb_log_joint(model, x);
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < lj.size(); ++j) {
        if (lj(j) > lj(best)) best = j;
    }
    return static_cast<int>(best);
}

}  // namespace ecoml

#include "ecoml/lda.hpp"

#include <cmath>
#include <string>

namespace ecoml {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw ModelError("pooled covariance is not positive definite");
    return llt;
}

void check_dim(const LdaModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p()) {
        throw ModelError("LDA expects " + std::to_string(model.p()) + " features, got " + std::to_string(x.size()));
    }
}

void check_class(const LdaModel& model, std::size_t k) {
    if (k >= model.c()) throw ModelError("class index " + std::to_string(k) + " out of range");
}

}  // namespace

LdaModel make_lda_model(std::vector<Eigen::VectorXd> class_means, Eigen::MatrixXd pooled_covariance,
                        std::vector<double> priors, const Eigen::MatrixXd& between_scatter) {
    const auto p = pooled_covariance.rows();
    if (p < 1 || pooled_covariance.cols() != p) throw ModelError("pooled covariance must be square");
    if (class_means.size() < 2 || priors.size() != class_means.size()) {
        throw ModelError("LDA needs matching class means and priors for at least 2 classes");
    }
    for (const auto& mu : class_means) {
        if (mu.size() != p) throw ModelError("class mean has the wrong dimension");
    }
    if (!pooled_covariance.allFinite()) throw ModelError("pooled covariance is not finite");

    LdaModel m;
    m.pooled_covariance = (pooled_covariance + pooled_covariance.transpose()) / 2.0;
    m.class_means = std::move(class_means);
    m.priors = std::move(priors);

    const auto llt = factor(m.pooled_covariance);
    const auto c = static_cast<Eigen::Index>(m.class_means.size());
    m.score_coefficients.resize(p, c);
    m.score_offsets.resize(c);
    for (Eigen::Index j = 0; j < c; ++j) {
        const auto& mu = m.class_means[static_cast<std::size_t>(j)];
        m.score_coefficients.col(j) = llt.solve(mu);
        m.score_offsets(j) = -0.5 * mu.dot(m.score_coefficients.col(j)) + std::log(m.priors[static_cast<std::size_t>(j)]);
    }

    if (between_scatter.size() > 0) {
        m.between_scatter = (between_scatter + between_scatter.transpose()) / 2.0;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(m.between_scatter, m.pooled_covariance);
        if (ges.info() != Eigen::Success) throw ModelError("discriminant eigenproblem failed");
        const Eigen::Index n_axes = std::min<Eigen::Index>(c - 1, p);
        m.discriminant_axes.resize(p, n_axes);
        m.axis_eigenvalues.resize(n_axes);
        for (Eigen::Index k = 0; k < n_axes; ++k) {
            // Eigenvalues come back ascending.
            const Eigen::Index src = p - 1 - k;
            Eigen::VectorXd v = ges.eigenvectors().col(src);
            Eigen::Index arg = 0;
            v.cwiseAbs().maxCoeff(&arg);
            if (v(arg) < 0) v = -v;
            m.discriminant_axes.col(k) = v;
            m.axis_eigenvalues(k) = ges.eigenvalues()(src);
        }
    }
    return m;
}

LdaModel fit_lda(const Dataset& ds, double epsilon) {
    const std::size_t c = ds.c();
    const auto p = static_cast<Eigen::Index>(ds.p());
    const auto counts = ds.class_counts();
    for (std::size_t j = 0; j < c; ++j) {
        if (counts[j] < 2) {
            throw ModelError("LDA: class \"" + ds.class_names()[j] + "\" has " + std::to_string(counts[j]) +
                             " training rows, needs at least 2");
        }
    }
    if (ds.n() <= c) throw ModelError("LDA needs more rows than classes");

    const auto& x = ds.features();
    std::vector<Eigen::VectorXd> means(c, Eigen::VectorXd::Zero(p));
    for (std::size_t i = 0; i < ds.n(); ++i) means[static_cast<std::size_t>(ds.label(i))] += ds.row(i);
    for (std::size_t j = 0; j < c; ++j) means[j] /= static_cast<double>(counts[j]);

    // Sum over classes of n_j * (sample covariance of class j).
    std::vector<Eigen::MatrixXd> scatter(c, Eigen::MatrixXd::Zero(p, p));
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const auto j = static_cast<std::size_t>(ds.label(i));
        const Eigen::VectorXd d = x.row(static_cast<Eigen::Index>(i)).transpose() - means[j];
        scatter[j].noalias() += d * d.transpose();
    }
    const double n = static_cast<double>(ds.n());
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t j = 0; j < c; ++j) {
        const double nj = static_cast<double>(counts[j]);
        pooled += (nj / (nj - 1.0)) * scatter[j];
    }
    pooled /= n;
    if (!pooled.allFinite()) throw ModelError("LDA: pooled covariance is not finite");

    const double tr = pooled.trace();
    const double ridge = epsilon * (tr > 0.0 ? tr / static_cast<double>(p) : 1.0);
    pooled.diagonal().array() += ridge;

    std::vector<double> priors(c);
    Eigen::VectorXd grand = Eigen::VectorXd::Zero(p);
    for (std::size_t j = 0; j < c; ++j) {
        priors[j] = static_cast<double>(counts[j]) / n;
        grand += priors[j] * means[j];
    }
    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t j = 0; j < c; ++j) {
        const Eigen::VectorXd d = means[j] - grand;
        between.noalias() += priors[j] * d * d.transpose();
    }

    auto model = make_lda_model(std::move(means), std::move(pooled), std::move(priors), between);
    model.regularization_epsilon = epsilon;
    return model;
}

Eigen::VectorXd LdaModel::scores(const Eigen::VectorXd& x) const {
    check_dim(*this, x);
    return score_coefficients.transpose() * x + score_offsets;
}

int LdaModel::predict(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd s = scores(x);
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < s.size(); ++j) {
        if (s(j) > s(best)) best = j;
    }
    return static_cast<int>(best);
}

Eigen::VectorXd LdaModel::transform(const Eigen::VectorXd& x) const {
    check_dim(*this, x);
    return discriminant_axes.transpose() * x;
}

int predict_lda(const LdaModel& model, const Eigen::VectorXd& x) { return model.predict(x); }

double lda_score(const LdaModel& model, const Eigen::VectorXd& direction, std::size_t class_i, std::size_t class_j) {
    check_dim(model, direction);
    check_class(model, class_i);
    check_class(model, class_j);
    const double denom = direction.dot(model.pooled_covariance * direction);
    if (direction.squaredNorm() == 0.0 || !(denom > 0.0)) throw ModelError("score direction must be nonzero");
    const double num = direction.dot(model.class_means[class_i] - model.class_means[class_j]);
    return num * num / denom;
}

double fisher_ratio(const LdaModel& model, const Eigen::VectorXd& direction) {
    check_dim(model, direction);
    if (model.between_scatter.size() == 0) throw ModelError("model has no between-class scatter");
    const double denom = direction.dot(model.pooled_covariance * direction);
    if (direction.squaredNorm() == 0.0 || !(denom > 0.0)) throw ModelError("score direction must be nonzero");
    return direction.dot(model.between_scatter * direction) / denom;
}

double mahalanobis_sq(const LdaModel& model, std::size_t class_i, std::size_t class_j) {
    check_class(model, class_i);
    check_class(model, class_j);
    const Eigen::VectorXd diff = model.class_means[class_i] - model.class_means[class_j];
    const Eigen::VectorXd beta = factor(model.pooled_covariance).solve(diff);
    return std::max(0.0, beta.dot(diff));
}

std::vector<AxisRow> lda_axes_table(const LdaModel& model, const std::vector<std::string>& feature_names) {
    if (feature_names.size() != model.p()) throw ModelError("feature name count does not match the model");
    std::vector<AxisRow> rows;
    for (std::size_t f = 0; f < model.p(); ++f) {
        AxisRow r{feature_names[f], {}};
        for (Eigen::Index k = 0; k < model.discriminant_axes.cols(); ++k) {
            r.coefficients.push_back(model.discriminant_axes(static_cast<Eigen::Index>(f), k));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ecoml

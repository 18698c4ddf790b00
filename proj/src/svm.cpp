#include "ecoml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace ecoml {

std::string kernel_name(KernelKind kind) { return kind == KernelKind::Linear ? "linear" : "radial"; }

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw ModelError("kernel arguments have different dimensions");
    if (spec.kind == KernelKind::Linear) return x.dot(y);
    return std::exp(-spec.gamma * (x - y).squaredNorm());
}

double default_gamma(std::size_t p) {
    if (p < 1) throw ModelError("default gamma needs at least one feature");
    return 1.0 / static_cast<double>(p);
}

SvmParams default_svm_params(std::size_t p) {
    SvmParams params;
    params.cost = 1.0;
    params.kernel = KernelSpec::rbf(default_gamma(p));
    return params;
}

namespace {

struct TwoClassView {
    int positive = 0;
    int negative = 0;
    std::vector<double> y;
};

TwoClassView two_class_labels(const Dataset& ds) {
    std::set<int> present(ds.labels().begin(), ds.labels().end());
    if (present.size() < 2) throw ModelError("SVM needs both classes present, got a single class");
    if (present.size() > 2) throw ModelError("binary SVM got more than two classes");
    TwoClassView v;
    v.positive = *present.begin();
    v.negative = *present.rbegin();
    v.y.reserve(ds.n());
    for (int k : ds.labels()) v.y.push_back(k == v.positive ? 1.0 : -1.0);
    return v;
}

bool in_up(double y, double a, double c) { return (y > 0 && a < c) || (y < 0 && a > 0); }
bool in_low(double y, double a, double c) { return (y < 0 && a < c) || (y > 0 && a > 0); }

// Largest violation m - M over the working sets, given -y_i G_i values.
double kkt_gap(const std::vector<double>& y, const std::vector<double>& alpha, const std::vector<double>& neg_yg,
               double cost) {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (in_up(y[t], alpha[t], cost)) up = std::max(up, neg_yg[t]);
        if (in_low(y[t], alpha[t], cost)) low = std::min(low, neg_yg[t]);
    }
    if (!std::isfinite(up) || !std::isfinite(low)) return 0.0;
    return std::max(0.0, up - low);
}

}  // namespace

SvmBinaryModel fit_svm_binary(const Dataset& ds, const SvmParams& params) {
    if (!(params.cost > 0.0)) throw ModelError("SVM cost must be positive");
    if (params.kernel.kind == KernelKind::Rbf && !(params.kernel.gamma > 0.0)) {
        throw ModelError("rbf gamma must be positive");
    }
    const TwoClassView view = two_class_labels(ds);
    const std::vector<double>& y = view.y;
    const std::size_t n = ds.n();
    const double cost = params.cost;
    const auto& x = ds.features();

    Eigen::MatrixXd k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            k(i, j) = k(j, i) = kernel_eval(params.kernel, x.row(i).transpose(), x.row(j).transpose());
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
    std::vector<double> neg_yg(n);
    const std::size_t max_iter = params.max_iter > 0 ? params.max_iter : 10000 * n;

    SvmBinaryModel model;
    model.converged = false;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        std::size_t i = n;
        std::size_t j = n;
        double up = -std::numeric_limits<double>::infinity();
        double low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            neg_yg[t] = -y[t] * grad[t];
            if (in_up(y[t], alpha[t], cost) && neg_yg[t] > up) {
                up = neg_yg[t];
                i = t;
            }
            if (in_low(y[t], alpha[t], cost) && neg_yg[t] < low) {
                low = neg_yg[t];
                j = t;
            }
        }
        if (i == n || j == n || up - low < params.tolerance) {
            model.converged = true;
            break;
        }

        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        double eta = k(ii, ii) + k(jj, jj) - 2.0 * k(ii, jj);
        if (eta <= 0.0) eta = 1e-12;
        // Move along alpha_i += y_i t, alpha_j -= y_j t, which keeps y'alpha fixed.
        double step = (up - low) / eta;
        const double room_i = y[i] > 0 ? cost - alpha[i] : alpha[i];
        const double room_j = y[j] > 0 ? alpha[j] : cost - alpha[j];
        bool clip_i = false;
        bool clip_j = false;
        if (step >= room_i) {
            step = room_i;
            clip_i = true;
        }
        if (step >= room_j) {
            step = room_j;
            clip_j = true;
            clip_i = room_i == room_j;
        }
        alpha[i] = clip_i ? (y[i] > 0 ? cost : 0.0) : alpha[i] + y[i] * step;
        alpha[j] = clip_j ? (y[j] > 0 ? 0.0 : cost) : alpha[j] - y[j] * step;
        for (std::size_t t = 0; t < n; ++t) {
            const auto tt = static_cast<Eigen::Index>(t);
            grad[t] += y[t] * step * (k(tt, ii) - k(tt, jj));
        }
    }
    model.iterations = iter;

    for (std::size_t t = 0; t < n; ++t) neg_yg[t] = -y[t] * grad[t];
    model.max_kkt_violation = kkt_gap(y, alpha, neg_yg, cost);

    // rho from free vectors (y_i G_i is constant on them), else the midpoint of
    // the bounds implied by the clamped ones.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= cost) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++n_free;
        }
    }
    double rho = 0.0;
    if (n_free > 0) {
        rho = free_sum / static_cast<double>(n_free);
    } else if (std::isfinite(ub) && std::isfinite(lb)) {
        rho = (ub + lb) / 2.0;
    } else if (std::isfinite(ub)) {
        rho = ub;
    } else if (std::isfinite(lb)) {
        rho = lb;
    }
    model.bias = -rho;

    std::vector<Index> sv;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > kSupportVectorThreshold) sv.push_back(t);
    }
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
    for (std::size_t s = 0; s < sv.size(); ++s) {
        model.support_vectors.row(static_cast<Eigen::Index>(s)) = x.row(static_cast<Eigen::Index>(sv[s]));
        model.alphas.push_back(alpha[sv[s]]);
        model.dual_weights.push_back(alpha[sv[s]] * y[sv[s]]);
    }
    model.support_indices = std::move(sv);
    model.cost = cost;
    model.kernel = params.kernel;
    return model;
}

double svm_decision_value(const SvmBinaryModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p() && model.n_support() > 0) {
        throw ModelError("SVM expects " + std::to_string(model.p()) + " features, got " + std::to_string(x.size()));
    }
    double f = model.bias;
    for (std::size_t s = 0; s < model.n_support(); ++s) {
        f += model.dual_weights[s] *
             kernel_eval(model.kernel, model.support_vectors.row(static_cast<Eigen::Index>(s)).transpose(), x);
    }
    return f;
}

std::size_t SvmMulticlassModel::total_support() const {
    std::size_t s = 0;
    for (const auto& m : machines) s += m.n_support();
    return s;
}

std::size_t SvmMulticlassModel::unique_support() const {
    std::set<Index> rows;
    for (const auto& m : machines) rows.insert(m.support_indices.begin(), m.support_indices.end());
    return rows.size();
}

SvmMulticlassModel fit_svm_multiclass(const Dataset& ds, const SvmParams& params) {
    const std::size_t c = ds.c();
    SvmMulticlassModel model;
    model.n_classes = c;
    model.n_features = ds.p();
    model.cost = params.cost;
    model.kernel = params.kernel;
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = a + 1; b < c; ++b) {
            IndexList rows;
            for (std::size_t i = 0; i < ds.n(); ++i) {
                const auto k = static_cast<std::size_t>(ds.label(i));
                if (k == a || k == b) rows.push_back(i);
            }
            SvmBinaryModel m;
            try {
                m = fit_svm_binary(ds.subset(rows), params);
            } catch (const ModelError& e) {
                throw ModelError("SVM pair (" + ds.class_names()[a] + ", " + ds.class_names()[b] + "): " + e.what());
            }
            for (auto& s : m.support_indices) s = rows[s];
            model.machines.push_back(std::move(m));
            model.pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return model;
}

int predict_svm(const SvmMulticlassModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.n_features) {
        throw ModelError("SVM expects " + std::to_string(model.n_features) + " features, got " +
                         std::to_string(x.size()));
    }
    std::vector<std::size_t> votes(model.n_classes, 0);
    std::vector<double> strength(model.n_classes, 0.0);
    for (std::size_t m = 0; m < model.machines.size(); ++m) {
        const double f = svm_decision_value(model.machines[m], x);
        const auto winner = static_cast<std::size_t>(f >= 0.0 ? model.pairs[m].first : model.pairs[m].second);
        ++votes[winner];
        strength[winner] += std::abs(f);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < model.n_classes; ++k) {
        if (votes[k] > votes[best] || (votes[k] == votes[best] && strength[k] > strength[best])) best = k;
    }
    return static_cast<int>(best);
}

SvmDiagnostics svm_diagnostics(const SvmBinaryModel& model, const Dataset& ds) {
    const TwoClassView view = two_class_labels(ds);
    const std::size_t n = ds.n();
    std::vector<double> alpha(n, 0.0);
    for (std::size_t s = 0; s < model.n_support(); ++s) {
        if (model.support_indices[s] >= n) throw ModelError("support index outside the given data");
        alpha[model.support_indices[s]] = model.alphas[s];
    }
    SvmDiagnostics d;
    d.min_alpha = *std::min_element(alpha.begin(), alpha.end());
    d.max_alpha = *std::max_element(alpha.begin(), alpha.end());
    double eq = 0.0;
    for (std::size_t t = 0; t < n; ++t) eq += alpha[t] * view.y[t];
    d.equality_residual = std::abs(eq);

    // -y_t G_t = y_t - (f(x_t) - b)
    std::vector<double> neg_yg(n);
    for (std::size_t t = 0; t < n; ++t) {
        neg_yg[t] = view.y[t] - (svm_decision_value(model, ds.row(t)) - model.bias);
    }
    d.max_kkt_violation = kkt_gap(view.y, alpha, neg_yg, model.cost);
    return d;
}

std::vector<SvmSummaryField> svm_summary(const SvmMulticlassModel& model, const std::vector<std::string>& class_names) {
    auto num = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    std::string levels;
    for (std::size_t k = 0; k < class_names.size(); ++k) levels += (k ? ", " : "") + class_names[k];
    std::vector<SvmSummaryField> out = {
        {"SVM-Type", "C-classification"},
        {"SVM-Kernel", kernel_name(model.kernel.kind)},
        {"Cost", num(model.cost)},
    };
    if (model.kernel.kind == KernelKind::Rbf) out.push_back({"Gamma", num(model.kernel.gamma)});
    out.push_back({"Number of Support Vectors", std::to_string(model.unique_support())});
    out.push_back({"Support Vectors (summed over machines)", std::to_string(model.total_support())});
    out.push_back({"Number of Machines", std::to_string(model.machines.size())});
    out.push_back({"Number of Classes", std::to_string(model.n_classes)});
    out.push_back({"Levels", levels});
    return out;
}

}  // namespace ecoml

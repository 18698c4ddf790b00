#include "ecoml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ecoml/random.hpp"

namespace ecoml {

std::size_t default_m_try(std::size_t p) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
}

int vote_mode(const std::vector<std::size_t>& votes) {
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<std::size_t> ForestModel::votes(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != n_features) {
        throw ModelError("forest expects " + std::to_string(n_features) + " features, got " +
                         std::to_string(x.size()));
    }
    std::vector<std::size_t> tally(n_classes, 0);
    for (const auto& t : trees) ++tally[static_cast<std::size_t>(t.predict(x))];
    return tally;
}

int ForestModel::predict(const Eigen::VectorXd& x) const { return vote_mode(votes(x)); }

int predict_forest(const ForestModel& model, const Eigen::VectorXd& x) { return model.predict(x); }

ForestModel fit_random_forest(const Dataset& ds, const ForestParams& params) {
    if (params.n_trees < 1) throw ModelError("forest needs at least one tree");
    const std::size_t p = ds.p();
    const std::size_t m_try = params.m_try.value_or(default_m_try(p));
    if (m_try < 1 || m_try > p) {
        throw ModelError("m_try " + std::to_string(m_try) + " must lie in [1, " + std::to_string(p) + "]");
    }

    ForestModel model;
    model.m_try = m_try;
    model.seed = params.seed;
    model.n_features = p;
    model.n_classes = ds.c();
    model.importance.assign(p, 0.0);
    model.trees.reserve(params.n_trees);

    TreeParams tree_params;
    tree_params.criterion = SplitCriterion::Gini;

    const std::size_t n = ds.n();
    IndexList rows(n);
    std::vector<double> tree_importance(p, 0.0);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        // Each tree draws from its own stream, so trees are order independent.
        Rng rng(derive_seed(params.seed, {t}));
        if (params.bootstrap) {
            std::uniform_int_distribution<Index> pick(0, n - 1);
            for (auto& r : rows) r = pick(rng);
        } else {
            std::iota(rows.begin(), rows.end(), Index{0});
        }
        detail::FeatureSampler sampler{m_try, &rng};
        std::fill(tree_importance.begin(), tree_importance.end(), 0.0);
        model.trees.push_back(detail::grow_tree(ds, rows, tree_params, &sampler, &tree_importance));
        for (std::size_t f = 0; f < p; ++f) model.importance[f] += tree_importance[f];
    }
    for (auto& v : model.importance) v /= static_cast<double>(params.n_trees);
    return model;
}

std::vector<double> forest_error_trace(const ForestModel& model, const Dataset& ds) {
    if (ds.p() != model.n_features) throw ModelError("dataset feature count does not match the forest");
    std::vector<std::vector<std::size_t>> tallies(ds.n(), std::vector<std::size_t>(model.n_classes, 0));
    std::vector<double> trace;
    trace.reserve(model.trees.size());
    for (const auto& tree : model.trees) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < ds.n(); ++i) {
            ++tallies[i][static_cast<std::size_t>(tree.predict(ds.row(i)))];
            if (vote_mode(tallies[i]) != ds.label(i)) ++wrong;
        }
        trace.push_back(static_cast<double>(wrong) / static_cast<double>(ds.n()));
    }
    return trace;
}

}  // namespace ecoml

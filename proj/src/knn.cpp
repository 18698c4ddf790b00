#include "ecoml/knn.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace ecoml {

KnnModel fit_knn(const Dataset& ds, std::size_t k) {
    if (k < 1) throw ModelError("k must be positive");
    if (k > ds.n()) {
        throw ModelError("k = " + std::to_string(k) + " exceeds the " + std::to_string(ds.n()) + " training rows");
    }
    return KnnModel{ds.features(), ds.labels(), ds.c(), k};
}

std::vector<Index> knn_neighbors(const KnnModel& model, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != model.p()) {
        throw ModelError("k-NN expects " + std::to_string(model.p()) + " features, got " + std::to_string(x.size()));
    }
    if (model.k < 1 || model.k > model.n()) throw ModelError("k must lie in [1, n]");

    std::vector<std::pair<double, Index>> dist;
    dist.reserve(model.n());
    for (std::size_t i = 0; i < model.n(); ++i) {
        dist.emplace_back((model.features.row(static_cast<Eigen::Index>(i)).transpose() - x).norm(), i);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<Index> out;
    out.reserve(model.k);
    for (std::size_t i = 0; i < model.k; ++i) out.push_back(dist[i].second);
    return out;
}

int knn_predict(const KnnModel& model, const Eigen::VectorXd& x) {
    std::vector<std::size_t> tally(model.n_classes, 0);
    for (Index i : knn_neighbors(model, x)) ++tally[static_cast<std::size_t>(model.labels[i])];
    return static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
}

}  // namespace ecoml

#include "ecoml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ecoml {

double entropy(std::span<const std::size_t> class_counts) {
    std::size_t total = 0;
    for (auto k : class_counts) total += k;
    if (total == 0) throw ModelError("entropy of an empty count vector");
    double h = 0.0;
    const double n = static_cast<double>(total);
    for (auto k : class_counts) {
        if (k == 0) continue;
        if (k == total) return 0.0;
        const double p = static_cast<double>(k) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double gini(std::span<const std::size_t> class_counts) {
    std::size_t total = 0;
    for (auto k : class_counts) total += k;
    if (total == 0) throw ModelError("gini impurity of an empty count vector");
    const double n = static_cast<double>(total);
    double s = 0.0;
    for (auto k : class_counts) {
        const double p = static_cast<double>(k) / n;
        s += p * p;
    }
    return 1.0 - s;
}

double conditional_entropy(const std::vector<std::vector<std::size_t>>& partition) {
    std::size_t total = 0;
    std::vector<std::size_t> sizes;
    for (const auto& part : partition) {
        sizes.push_back(std::accumulate(part.begin(), part.end(), std::size_t{0}));
        total += sizes.back();
    }
    if (total == 0) throw ModelError("conditional entropy of an empty partition");
    double h = 0.0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (sizes[i] == 0) continue;
        h += static_cast<double>(sizes[i]) / static_cast<double>(total) * entropy(partition[i]);
    }
    return h;
}

double information_gain(std::span<const std::size_t> parent, const std::vector<std::vector<std::size_t>>& partition) {
    std::vector<std::size_t> sum(parent.size(), 0);
    for (const auto& part : partition) {
        if (part.size() != parent.size()) throw ModelError("partition class count differs from parent");
        for (std::size_t k = 0; k < part.size(); ++k) sum[k] += part[k];
    }
    if (!std::equal(sum.begin(), sum.end(), parent.begin())) {
        throw ModelError("partition totals do not add up to the parent counts");
    }
    return entropy(parent) - conditional_entropy(partition);
}

// ---------------------------------------------------------------------------

std::size_t DecisionTreeModel::leaf_for(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != n_features) {
        throw ModelError("tree expects " + std::to_string(n_features) + " features, got " +
                         std::to_string(x.size()));
    }
    std::size_t i = 0;
    while (!nodes[i].leaf) {
        const auto& nd = nodes[i];
        i = x(static_cast<Eigen::Index>(nd.feature)) <= nd.threshold ? nd.left : nd.right;
    }
    return i;
}

int DecisionTreeModel::predict(const Eigen::VectorXd& x) const { return nodes[leaf_for(x)].class_index; }

std::size_t DecisionTreeModel::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t best = 0;
    // Children always have larger indices than their parent.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].leaf) continue;
        d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
        best = std::max(best, d[i] + 1);
    }
    return best;
}

int predict_tree(const DecisionTreeModel& model, const Eigen::VectorXd& x) { return model.predict(x); }

namespace {

constexpr double kGainTieTolerance = 1e-12;

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    double left_impurity = 0.0;
    double right_impurity = 0.0;
    std::size_t n_left = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& ds, const TreeParams& params, const detail::FeatureSampler* sampler,
                std::vector<double>* importance)
        : ds_(ds), params_(params), sampler_(sampler), importance_(importance) {}

    DecisionTreeModel build(std::span<const Index> rows) {
        model_.params = params_;
        model_.n_features = ds_.p();
        model_.n_classes = ds_.c();
        grow(IndexList(rows.begin(), rows.end()), 0);
        return std::move(model_);
    }

private:
    double impurity(std::span<const std::size_t> counts) const {
        return params_.criterion == SplitCriterion::Entropy ? entropy(counts) : gini(counts);
    }

    std::vector<std::size_t> counts_of(const IndexList& rows) const {
        std::vector<std::size_t> counts(ds_.c(), 0);
        for (Index r : rows) ++counts[static_cast<std::size_t>(ds_.label(r))];
        return counts;
    }

    double value(Index row, std::size_t f) const {
        return ds_.features()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(f));
    }

    // Scans midpoints between consecutive distinct values of feature f.
    void scan_feature(const IndexList& rows, std::size_t f, double parent_impurity,
                      const std::vector<std::size_t>& parent_counts, SplitChoice& best) const {
        IndexList sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(), [&](Index a, Index b) { return value(a, f) < value(b, f); });
        std::vector<std::size_t> left(ds_.c(), 0);
        std::vector<std::size_t> right = parent_counts;
        const double n = static_cast<double>(rows.size());
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            const auto y = static_cast<std::size_t>(ds_.label(sorted[i]));
            ++left[y];
            --right[y];
            const double lo = value(sorted[i], f);
            const double hi = value(sorted[i + 1], f);
            if (!(lo < hi)) continue;
            double t = lo + (hi - lo) / 2.0;
            if (!(t < hi)) t = lo;
            const double n_left = static_cast<double>(i + 1);
            const double li = impurity(left);
            const double ri = impurity(right);
            const double gain = parent_impurity - (n_left / n) * li - ((n - n_left) / n) * ri;
            if (!best.found || gain > best.gain + kGainTieTolerance) {
                best = {true, f, t, gain, li, ri, i + 1};
            }
        }
    }

    std::vector<std::size_t> candidate_order(std::size_t p) const {
        std::vector<std::size_t> all(p);
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (sampler_ == nullptr || sampler_->m_try >= p) return all;
        // Partial Fisher-Yates: the first m_try entries become the drawn subset.
        for (std::size_t i = 0; i < sampler_->m_try; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, p - 1);
            std::swap(all[i], all[pick(*sampler_->rng)]);
        }
        return all;
    }

    SplitChoice best_split(const IndexList& rows, double parent_impurity,
                           const std::vector<std::size_t>& parent_counts) const {
        const std::size_t p = ds_.p();
        const auto order = candidate_order(p);
        const std::size_t m = sampler_ == nullptr ? p : std::min(sampler_->m_try, p);

        SplitChoice best;
        std::vector<std::size_t> drawn(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(drawn.begin(), drawn.end());
        for (auto f : drawn) scan_feature(rows, f, parent_impurity, parent_counts, best);
        if (best.found || m == p) return best;

        std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(m), order.end());
        for (auto f : rest) {
            scan_feature(rows, f, parent_impurity, parent_counts, best);
            if (best.found) break;
        }
        return best;
    }

    std::size_t grow(IndexList rows, std::size_t depth) {
        const std::size_t id = model_.nodes.size();
        model_.nodes.emplace_back();

        const auto counts = counts_of(rows);
        const double n = static_cast<double>(rows.size());
        TreeNode node;
        node.n_samples = rows.size();
        node.impurity = impurity(counts);
        node.class_distribution.resize(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) node.class_distribution[k] = static_cast<double>(counts[k]) / n;
        node.class_index = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());

        const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t k) { return k > 0; }) <= 1;
        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_capped || rows.size() < params_.min_samples_split) {
            model_.nodes[id] = std::move(node);
            return id;
        }

        const SplitChoice split = best_split(rows, node.impurity, counts);
        if (!split.found) {
            model_.nodes[id] = std::move(node);
            return id;
        }

        IndexList left_rows;
        IndexList right_rows;
        for (Index r : rows) (value(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);

        if (importance_ != nullptr) {
            const double nl = static_cast<double>(left_rows.size());
            const double nr = static_cast<double>(right_rows.size());
            (*importance_)[split.feature] += n * node.impurity - nl * split.left_impurity - nr * split.right_impurity;
        }

        node.leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        model_.nodes[id] = std::move(node);
        rows.clear();
        rows.shrink_to_fit();

        const std::size_t l = grow(std::move(left_rows), depth + 1);
        const std::size_t r = grow(std::move(right_rows), depth + 1);
        model_.nodes[id].left = l;
        model_.nodes[id].right = r;
        return id;
    }

    const Dataset& ds_;
    const TreeParams& params_;
    const detail::FeatureSampler* sampler_;
    std::vector<double>* importance_;
    DecisionTreeModel model_;
};

}  // namespace

namespace detail {

DecisionTreeModel grow_tree(const Dataset& ds, std::span<const Index> rows, const TreeParams& params,
                            const FeatureSampler* sampler, std::vector<double>* importance) {
    if (rows.empty()) throw ModelError("cannot grow a tree on zero rows");
    if (params.min_samples_split < 2) throw ModelError("min_samples_split must be at least 2");
    if (importance != nullptr && importance->size() != ds.p()) importance->assign(ds.p(), 0.0);
    return TreeBuilder(ds, params, sampler, importance).build(rows);
}

}  // namespace detail

DecisionTreeModel fit_decision_tree(const Dataset& ds, const TreeParams& params) {
    IndexList rows(ds.n());
    std::iota(rows.begin(), rows.end(), Index{0});
    return detail::grow_tree(ds, rows, params, nullptr, nullptr);
}

}  // namespace ecoml

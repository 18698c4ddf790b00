#include "ecoml/metrics.hpp"

#include <string>

namespace ecoml {

ConfusionMatrix::ConfusionMatrix(std::size_t c) : c_(c), counts_(c * c, 0) {
    if (c < 1) throw MetricsError("confusion matrix needs at least one class");
}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::uint64_t count) {
    if (actual >= c_ || predicted >= c_) throw MetricsError("class index out of range");
    counts_[actual * c_ + predicted] += count;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t s = 0;
    for (auto v : counts_) s += v;
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < c_; ++k) s += at(k, k);
    return s;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t k) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < c_; ++j) s += at(k, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t k) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < c_; ++i) s += at(i, k);
    return s;
}

double ConfusionMatrix::accuracy() const {
    const auto t = total();
    if (t == 0) throw MetricsError("empty confusion matrix");
    return static_cast<double>(trace()) / static_cast<double>(t);
}

ConfusionMatrix confusion_matrix(std::span<const int> actual, std::span<const int> predicted, std::size_t c) {
    if (actual.size() != predicted.size()) {
        throw MetricsError("actual has " + std::to_string(actual.size()) + " labels but predicted has " +
                           std::to_string(predicted.size()));
    }
    if (actual.empty()) throw MetricsError("no labels to score");
    ConfusionMatrix cm(c);
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (actual[t] < 0 || predicted[t] < 0 || static_cast<std::size_t>(actual[t]) >= c ||
            static_cast<std::size_t>(predicted[t]) >= c) {
            throw MetricsError("label out of range at position " + std::to_string(t));
        }
        cm.add(static_cast<std::size_t>(actual[t]), static_cast<std::size_t>(predicted[t]));
    }
    return cm;
}

BinaryAggregates one_vs_rest(const ConfusionMatrix& cm, std::size_t k) {
    if (k >= cm.classes()) throw MetricsError("class index " + std::to_string(k) + " out of range");
    const auto tp = cm.at(k, k);
    const auto fn = cm.row_sum(k) - tp;
    const auto fp = cm.col_sum(k) - tp;
    const auto tn = cm.total() - tp - fn - fp;
    return {static_cast<double>(tp), static_cast<double>(fp), static_cast<double>(tn), static_cast<double>(fn)};
}

BinaryAggregates macro_aggregate(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw MetricsError("empty confusion matrix");
    BinaryAggregates sum;
    for (std::size_t k = 0; k < cm.classes(); ++k) {
        const auto a = one_vs_rest(cm, k);
        sum.tp += a.tp;
        sum.fp += a.fp;
        sum.tn += a.tn;
        sum.fn += a.fn;
    }
    const double scale = static_cast<double>(cm.classes()) * static_cast<double>(total);
    return {sum.tp / scale, sum.fp / scale, sum.tn / scale, sum.fn / scale};
}

MeasureSet measures(const BinaryAggregates& agg) {
    if (agg.tp < 0 || agg.fp < 0 || agg.tn < 0 || agg.fn < 0) throw MetricsError("negative aggregate count");
    const double total = agg.total();
    if (!(total > 0.0)) throw MetricsError("all-zero aggregates");
    MeasureSet m;
    m.recall = agg.tp + agg.fn > 0.0 ? agg.tp / (agg.tp + agg.fn) : 0.0;
    m.precision = agg.tp + agg.fp > 0.0 ? agg.tp / (agg.tp + agg.fp) : 0.0;
    m.accuracy = (agg.tp + agg.tn) / total;
    m.f_score = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

}  // namespace ecoml

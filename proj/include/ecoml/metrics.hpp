#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ecoml {

class MetricsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Square count table, rows = actual class, columns = predicted class.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t c);

    std::size_t classes() const { return c_; }
    std::uint64_t at(std::size_t actual, std::size_t predicted) const { return counts_[actual * c_ + predicted]; }
    void add(std::size_t actual, std::size_t predicted, std::uint64_t count = 1);

    std::uint64_t total() const;
    std::uint64_t trace() const;
    std::uint64_t row_sum(std::size_t k) const;
    std::uint64_t col_sum(std::size_t k) const;
    /// trace / total.
    double accuracy() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t c_;
    std::vector<std::uint64_t> counts_;
};

struct BinaryAggregates {
    double tp = 0.0;
    double fp = 0.0;
    double tn = 0.0;
    double fn = 0.0;

    double total() const { return tp + fp + tn + fn; }
};

struct MeasureSet {
    double recall = 0.0;
    double precision = 0.0;
    double accuracy = 0.0;
    double f_score = 0.0;
};

ConfusionMatrix confusion_matrix(std::span<const int> actual, std::span<const int> predicted, std::size_t c);

/// Raw counts of class `k` against all others.
BinaryAggregates one_vs_rest(const ConfusionMatrix& cm, std::size_t k);

/// Class-averaged one-vs-rest counts, each divided by the grand total, so the
/// four components sum to 1.
BinaryAggregates macro_aggregate(const ConfusionMatrix& cm);

/// Recall, precision, accuracy and F-score of a two-by-two summary. A zero
/// denominator yields 0 for that measure.
MeasureSet measures(const BinaryAggregates& agg);

}  // namespace ecoml

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ecoml {

/// Raised for malformed input data: bad CSV cells, violated dataset invariants,
/// out-of-range split parameters.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a model cannot be fitted or applied: unmet preconditions,
/// dimension mismatches, numerical failure.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Index = std::size_t;
using IndexList = std::vector<Index>;

/// Labeled tabular data: an n x p feature matrix plus one class index per row.
///
/// Class indices refer into `class_names`. A subset (for example the training
/// part of a fold) keeps the full class list even when some classes have no
/// rows left.
class Dataset {
public:
    Dataset() = default;
    Dataset(Eigen::MatrixXd features, std::vector<int> labels, std::vector<std::string> feature_names,
            std::vector<std::string> class_names, std::string label_name = "label");

    std::size_t n() const { return static_cast<std::size_t>(features_.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(features_.cols()); }
    std::size_t c() const { return class_names_.size(); }

    const Eigen::MatrixXd& features() const { return features_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_names() const { return class_names_; }
    const std::string& label_name() const { return label_name_; }

    Eigen::VectorXd row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)).transpose(); }
    int label(std::size_t i) const { return labels_[i]; }

    std::vector<std::size_t> class_counts() const;

    /// Rows in the given order; indices may repeat (bootstrap samples).
    Dataset subset(std::span<const Index> rows) const;

    /// Same labels and names, new feature values.
    Dataset with_features(Eigen::MatrixXd features) const;

private:
    void validate() const;

    Eigen::MatrixXd features_;
    std::vector<int> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
    std::string label_name_ = "label";
};

/// Per-column z-score parameters. A zero std_dev marks a constant column,
/// which maps to all zeros.
struct ScalingParams {
    std::vector<double> means;
    std::vector<double> std_devs;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Dataset apply(const Dataset& ds) const;
    /// Inverse map; constant columns come back as their mean.
    Eigen::MatrixXd invert(const Eigen::MatrixXd& z) const;
};

ScalingParams fit_scaling(const Dataset& ds);
std::pair<Dataset, ScalingParams> standardize(const Dataset& ds);

struct FoldPlan {
    std::vector<IndexList> folds;

    std::size_t k() const { return folds.size(); }
    /// Every index not in fold `i`, ascending.
    IndexList complement(std::size_t i, std::size_t n) const;
};

struct SplitIndices {
    IndexList train;
    IndexList test;
};

/// Seeded shuffle, then the first floor(train_fraction * n) (at least 1) rows
/// train. With `stratified`, the floor is taken per class instead.
SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratified = false);
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction, std::uint64_t seed,
                                             bool stratified = false);

FoldPlan k_fold(std::size_t n, std::size_t k, std::uint64_t seed);
inline FoldPlan k_fold(const Dataset& ds, std::size_t k, std::uint64_t seed) { return k_fold(ds.n(), k, seed); }

/// Parameters for the synthetic sea-bed survey: five species counts (a-e),
/// depth in meters, pollution index and temperature in degrees C, with the
/// sediment type as the class.
struct SyntheticSpec {
    std::size_t n_per_class = 10;
    std::size_t n_classes = 3;
    /// Distance between adjacent class means along every feature, in units of
    /// that feature's spread. Ignored when `means` is given.
    double separation = 1.0;
    std::uint64_t seed = 42;
    /// Optional explicit per-class parameters, n_classes rows of 8 values.
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> spreads;
};

inline constexpr std::size_t kEcologicalFeatureCount = 8;
const std::vector<std::string>& ecological_feature_names();

Dataset generate_ecological(const SyntheticSpec& spec);

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv(const Dataset& ds);

/// Numeric-only table (header + rows). Used for prediction inputs, where the
/// label column may be absent. Columns named in `drop` are skipped if present.
struct NumericTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;
};
NumericTable load_numeric_csv(const std::filesystem::path& path, const std::vector<std::string>& drop = {});

}  // namespace ecoml

#include "ecoml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ecoml/random.hpp"

namespace ecoml {

Dataset::Dataset(Eigen::MatrixXd features, std::vector<int> labels, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names, std::string label_name)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      label_name_(std::move(label_name)) {
    validate();
}

void Dataset::validate() const {
    if (features_.rows() < 1) throw DataError("dataset has no rows");
    if (features_.cols() < 1) throw DataError("dataset has no feature columns");
    if (labels_.size() != n()) {
        throw DataError("label count " + std::to_string(labels_.size()) + " does not match row count " +
                        std::to_string(n()));
    }
    if (feature_names_.size() != p()) throw DataError("feature name count does not match column count");
    if (class_names_.size() < 2) throw DataError("dataset needs at least 2 class names");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || static_cast<std::size_t>(labels_[i]) >= c()) {
            throw DataError("row " + std::to_string(i) + ": label index " + std::to_string(labels_[i]) +
                            " out of range");
        }
    }
    if (!features_.allFinite()) throw DataError("dataset contains NaN or infinite feature values");
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(c(), 0);
    for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

Dataset Dataset::subset(std::span<const Index> rows) const {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    std::vector<int> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= n()) throw DataError("subset row index out of range");
        x.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(rows[i]));
        y[i] = labels_[rows[i]];
    }
    return Dataset(std::move(x), std::move(y), feature_names_, class_names_, label_name_);
}

Dataset Dataset::with_features(Eigen::MatrixXd features) const {
    return Dataset(std::move(features), labels_, feature_names_, class_names_, label_name_);
}

// ---------------------------------------------------------------------------
// Scaling

Eigen::VectorXd ScalingParams::apply(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != means.size()) {
        throw DataError("scaling expects " + std::to_string(means.size()) + " features, got " +
                        std::to_string(x.size()));
    }
    Eigen::VectorXd z(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        z(j) = std_devs[ju] > 0.0 ? (x(j) - means[ju]) / std_devs[ju] : 0.0;
    }
    return z;
}

Eigen::MatrixXd ScalingParams::apply(const Eigen::MatrixXd& x) const {
    if (static_cast<std::size_t>(x.cols()) != means.size()) {
        throw DataError("scaling expects " + std::to_string(means.size()) + " features, got " +
                        std::to_string(x.cols()));
    }
    Eigen::MatrixXd z(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (std_devs[ju] > 0.0) {
            z.col(j) = (x.col(j).array() - means[ju]) / std_devs[ju];
        } else {
            z.col(j).setZero();
        }
    }
    return z;
}

Dataset ScalingParams::apply(const Dataset& ds) const { return ds.with_features(apply(ds.features())); }

Eigen::MatrixXd ScalingParams::invert(const Eigen::MatrixXd& z) const {
    Eigen::MatrixXd x(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        x.col(j) = z.col(j).array() * std_devs[ju] + means[ju];
    }
    return x;
}

ScalingParams fit_scaling(const Dataset& ds) {
    if (ds.n() < 2) throw DataError("standardize needs at least 2 rows");
    const auto& x = ds.features();
    ScalingParams params;
    params.means.resize(ds.p());
    params.std_devs.resize(ds.p());
    const double n = static_cast<double>(ds.n());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        const double ss = (x.col(j).array() - mean).square().sum();
        double sd = std::sqrt(ss / (n - 1.0));
        // Columns whose spread is pure rounding noise relative to their magnitude are constant.
        if (sd <= 1e-14 * std::max(1.0, std::abs(mean))) sd = 0.0;
        params.means[static_cast<std::size_t>(j)] = mean;
        params.std_devs[static_cast<std::size_t>(j)] = sd;
    }
    return params;
}

std::pair<Dataset, ScalingParams> standardize(const Dataset& ds) {
    auto params = fit_scaling(ds);
    return {params.apply(ds), std::move(params)};
}

// ---------------------------------------------------------------------------
// Partitions

IndexList FoldPlan::complement(std::size_t i, std::size_t n) const {
    std::vector<bool> in_fold(n, false);
    for (Index r : folds.at(i)) in_fold[r] = true;
    IndexList out;
    out.reserve(n);
    for (Index r = 0; r < n; ++r) {
        if (!in_fold[r]) out.push_back(r);
    }
    return out;
}

namespace {

IndexList shuffled_range(std::size_t n, std::uint64_t seed) {
    IndexList idx(n);
    std::iota(idx.begin(), idx.end(), Index{0});
    Rng rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

}  // namespace

SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed, bool stratified) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw DataError("train fraction must lie in (0, 1)");
    }
    const std::size_t n = ds.n();
    if (n < 2) throw DataError("train/test split needs at least 2 rows");

    SplitIndices out;
    const IndexList order = shuffled_range(n, seed);
    if (!stratified) {
        auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
        n_train = std::max<std::size_t>(n_train, 1);
        if (n_train >= n) throw DataError("train fraction leaves the test set empty");
        out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
        return out;
    }

    std::vector<IndexList> by_class(ds.c());
    for (Index r : order) by_class[static_cast<std::size_t>(ds.label(r))].push_back(r);
    for (const auto& rows : by_class) {
        if (rows.empty()) continue;
        auto k = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(rows.size())));
        k = std::max<std::size_t>(k, 1);
        out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
        out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end());
    }
    if (out.test.empty()) throw DataError("train fraction leaves the test set empty");
    return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction, std::uint64_t seed,
                                             bool stratified) {
    const auto s = split_indices(ds, train_fraction, seed, stratified);
    return {ds.subset(s.train), ds.subset(s.test)};
}

FoldPlan k_fold(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) {
        throw DataError("fold count " + std::to_string(k) + " must lie in [2, " + std::to_string(n) + "]");
    }
    const IndexList order = shuffled_range(n, seed);
    FoldPlan plan;
    plan.folds.resize(k);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        plan.folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                             order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(plan.folds[f].begin(), plan.folds[f].end());
        pos += size;
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Synthetic survey data

const std::vector<std::string>& ecological_feature_names() {
    static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "depth", "pollution", "temperature"};
    return names;
}

namespace {

// Baseline level and within-class spread of each survey variable.
constexpr double kBaseMean[kEcologicalFeatureCount] = {20.0, 15.0, 12.0, 25.0, 10.0, 60.0, 6.0, 12.0};
constexpr double kBaseSpread[kEcologicalFeatureCount] = {2.0, 1.5, 1.2, 2.5, 1.0, 5.0, 0.6, 1.5};
// Direction in which successive sediment classes shift each variable.
constexpr double kShiftSign[kEcologicalFeatureCount] = {1.0, -1.0, 1.0, 1.0, -1.0, 1.0, 1.0, -1.0};

std::vector<std::string> sediment_names(std::size_t c) {
    static const char* base[] = {"C", "G", "S"};
    std::vector<std::string> out;
    for (std::size_t j = 0; j < c; ++j) out.push_back(j < 3 ? base[j] : "class" + std::to_string(j));
    return out;
}

}  // namespace

Dataset generate_ecological(const SyntheticSpec& spec) {
    if (spec.n_per_class < 1) throw DataError("n per class must be positive");
    if (spec.n_classes < 2) throw DataError("synthetic data needs at least 2 classes");
    const std::size_t c = spec.n_classes;
    const std::size_t p = kEcologicalFeatureCount;

    auto check_shape = [&](const std::vector<std::vector<double>>& m, const char* what) {
        if (m.empty()) return;
        if (m.size() != c) throw DataError(std::string(what) + " must have one row per class");
        for (const auto& r : m) {
            if (r.size() != p) throw DataError(std::string(what) + " rows must have 8 values");
        }
    };
    check_shape(spec.means, "means");
    check_shape(spec.spreads, "spreads");

    std::vector<std::vector<double>> means = spec.means;
    std::vector<std::vector<double>> spreads = spec.spreads;
    if (spreads.empty()) spreads.assign(c, std::vector<double>(kBaseSpread, kBaseSpread + p));
    if (means.empty()) {
        means.assign(c, std::vector<double>(p));
        const double centre = (static_cast<double>(c) - 1.0) / 2.0;
        for (std::size_t j = 0; j < c; ++j) {
            for (std::size_t f = 0; f < p; ++f) {
                means[j][f] = kBaseMean[f] + kShiftSign[f] * (static_cast<double>(j) - centre) * spec.separation *
                                                 kBaseSpread[f];
            }
        }
    }
    for (const auto& r : spreads) {
        for (double s : r) {
            if (!(s >= 0.0)) throw DataError("spreads must be nonnegative");
        }
    }

    const std::size_t n = c * spec.n_per_class;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    std::vector<int> y(n);
    Rng rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t row = 0;
    // Rows are interleaved by class so the file reads like a field log.
    for (std::size_t i = 0; i < spec.n_per_class; ++i) {
        for (std::size_t j = 0; j < c; ++j, ++row) {
            y[row] = static_cast<int>(j);
            for (std::size_t f = 0; f < p; ++f) {
                double v = means[j][f] + spreads[j][f] * normal(rng);
                if (f < 5) {
                    v = std::max(0.0, std::round(v));  // species counts
                } else if (f == 5) {
                    v = std::max(0.5, v);  // depth in meters
                } else if (f == 6) {
                    v = std::max(0.05, v);  // pollution index
                }
                x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(f)) = v;
            }
        }
    }
    return Dataset(std::move(x), std::move(y), ecological_feature_names(), sediment_names(c), "sediment");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

RawTable read_raw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    RawTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(line_no);
    }
    if (t.header.empty()) throw DataError(path.string() + ": missing header row");
    return t;
}

double parse_cell(const RawTable& t, std::size_t r, std::size_t col, const std::filesystem::path& path) {
    double v = 0.0;
    if (!parse_double(t.rows[r][col], v)) {
        throw DataError(path.string() + ":" + std::to_string(t.line_numbers[r]) + ": non-numeric value \"" +
                        t.rows[r][col] + "\" in column \"" + t.header[col] + "\"");
    }
    return v;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
    const RawTable t = read_raw(path);

    std::size_t label_col = t.header.size();
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (t.header[j] != label_column) continue;
        if (label_col != t.header.size()) throw DataError("label column \"" + label_column + "\" appears twice");
        label_col = j;
    }
    if (label_col == t.header.size()) throw DataError("label column \"" + label_column + "\" not found");
    if (t.rows.empty()) throw DataError(path.string() + ": no data rows");

    std::vector<std::string> feature_names;
    std::vector<std::size_t> feature_cols;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j == label_col) continue;
        feature_names.push_back(t.header[j]);
        feature_cols.push_back(j);
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(feature_cols.size()));
    std::vector<int> y(t.rows.size());
    std::vector<std::string> class_names;
    std::unordered_map<std::string, int> class_index;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = parse_cell(t, r, feature_cols[f], path);
        }
        const std::string& name = t.rows[r][label_col];
        auto [it, inserted] = class_index.try_emplace(name, static_cast<int>(class_names.size()));
        if (inserted) class_names.push_back(name);
        y[r] = it->second;
    }
    if (class_names.size() < 2) {
        throw DataError(path.string() + ": label column \"" + label_column + "\" has fewer than 2 distinct classes");
    }
    return Dataset(std::move(x), std::move(y), std::move(feature_names), std::move(class_names), label_column);
}

std::string to_csv(const Dataset& ds) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& name : ds.feature_names()) out << name << ',';
    out << ds.label_name() << '\n';
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.p(); ++j) {
            out << ds.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ',';
        }
        out << ds.class_names()[static_cast<std::size_t>(ds.label(i))] << '\n';
    }
    return out.str();
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << to_csv(ds);
    if (!out) throw DataError("write failed: " + path.string());
}

NumericTable load_numeric_csv(const std::filesystem::path& path, const std::vector<std::string>& drop) {
    if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
    const RawTable t = read_raw(path);
    NumericTable out;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (std::find(drop.begin(), drop.end(), t.header[j]) != drop.end()) continue;
        out.columns.push_back(t.header[j]);
        cols.push_back(j);
    }
    out.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t f = 0; f < cols.size(); ++f) {
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = parse_cell(t, r, cols[f], path);
        }
    }
    return out;
}

}  // namespace ecoml

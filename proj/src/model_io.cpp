#include "ecoml/model_io.hpp"

#include <fstream>

namespace ecoml {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

ojson matrix_json(const Eigen::MatrixXd& m) {
    ojson rows = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ojson row = ojson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return ojson{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd matrix_from(const ojson& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const ojson& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows) throw ModelError("model file: matrix row count mismatch");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const ojson& row = data[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ModelError("model file: matrix column count mismatch");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

ojson vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const ojson& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// -- trees -------------------------------------------------------------------

ojson node_json(const DecisionTreeModel& tree, std::size_t i) {
    const TreeNode& n = tree.nodes.at(i);
    ojson j;
    j["leaf"] = n.leaf;
    j["class_index"] = n.class_index;
    j["class_distribution"] = n.class_distribution;
    j["n_samples"] = n.n_samples;
    j["impurity"] = n.impurity;
    if (!n.leaf) {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["left"] = node_json(tree, n.left);
        j["right"] = node_json(tree, n.right);
    }
    return j;
}

std::size_t node_from(const ojson& j, std::vector<TreeNode>& nodes) {
    const std::size_t id = nodes.size();
    nodes.emplace_back();
    TreeNode n;
    n.leaf = j.at("leaf").get<bool>();
    n.class_index = j.at("class_index").get<int>();
    n.class_distribution = j.at("class_distribution").get<std::vector<double>>();
    n.n_samples = j.at("n_samples").get<std::size_t>();
    n.impurity = j.at("impurity").get<double>();
    if (!n.leaf) {
        n.feature = j.at("feature").get<std::size_t>();
        n.threshold = j.at("threshold").get<double>();
        n.left = node_from(j.at("left"), nodes);
        n.right = node_from(j.at("right"), nodes);
    }
    nodes[id] = std::move(n);
    return id;
}

ojson tree_json(const DecisionTreeModel& t) {
    ojson j;
    j["max_depth"] = t.params.max_depth ? ojson(*t.params.max_depth) : ojson(nullptr);
    j["min_samples_split"] = t.params.min_samples_split;
    j["criterion"] = t.params.criterion == SplitCriterion::Entropy ? "entropy" : "gini";
    j["n_features"] = t.n_features;
    j["n_classes"] = t.n_classes;
    j["root"] = node_json(t, 0);
    return j;
}

DecisionTreeModel tree_from(const ojson& j) {
    DecisionTreeModel t;
    if (!j.at("max_depth").is_null()) t.params.max_depth = j.at("max_depth").get<std::size_t>();
    t.params.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    t.params.criterion = j.at("criterion").get<std::string>() == "gini" ? SplitCriterion::Gini : SplitCriterion::Entropy;
    t.n_features = j.at("n_features").get<std::size_t>();
    t.n_classes = j.at("n_classes").get<std::size_t>();
    node_from(j.at("root"), t.nodes);
    return t;
}

ojson forest_json(const ForestModel& f) {
    ojson j;
    j["m_try"] = f.m_try;
    j["seed"] = f.seed;
    j["n_features"] = f.n_features;
    j["n_classes"] = f.n_classes;
    j["importance"] = f.importance;
    ojson trees = ojson::array();
    for (const auto& t : f.trees) trees.push_back(tree_json(t));
    j["trees"] = std::move(trees);
    return j;
}

ForestModel forest_from(const ojson& j) {
    ForestModel f;
    f.m_try = j.at("m_try").get<std::size_t>();
    f.seed = j.at("seed").get<std::uint64_t>();
    f.n_features = j.at("n_features").get<std::size_t>();
    f.n_classes = j.at("n_classes").get<std::size_t>();
    f.importance = j.at("importance").get<std::vector<double>>();
    for (const auto& t : j.at("trees")) f.trees.push_back(tree_from(t));
    return f;
}

// -- the rest ----------------------------------------------------------------

ojson mlp_json(const MlpModel& m) {
    return {{"hidden_weights", matrix_json(m.hidden_weights)},
            {"hidden_bias", vector_json(m.hidden_bias)},
            {"output_weights", matrix_json(m.output_weights)},
            {"output_bias", vector_json(m.output_bias)}};
}

MlpModel mlp_from(const ojson& j) {
    MlpModel m{matrix_from(j.at("hidden_weights")), vector_from(j.at("hidden_bias")),
               matrix_from(j.at("output_weights")), vector_from(j.at("output_bias"))};
    if (m.hidden_bias.size() != m.hidden_weights.rows() || m.output_weights.cols() != m.hidden_weights.rows() ||
        m.output_bias.size() != m.output_weights.rows()) {
        throw ModelError("model file: inconsistent network shapes");
    }
    return m;
}

ojson kernel_json(const KernelSpec& k) { return {{"kind", kernel_name(k.kind)}, {"gamma", k.gamma}}; }

KernelSpec kernel_from(const ojson& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "linear") return {KernelKind::Linear, j.at("gamma").get<double>()};
    if (kind == "radial") return {KernelKind::Rbf, j.at("gamma").get<double>()};
    throw ModelError("model file: unknown kernel '" + kind + "'");
}

ojson svm_json(const SvmMulticlassModel& s) {
    ojson j;
    j["n_classes"] = s.n_classes;
    j["n_features"] = s.n_features;
    j["cost"] = s.cost;
    j["kernel"] = kernel_json(s.kernel);
    ojson machines = ojson::array();
    for (std::size_t m = 0; m < s.machines.size(); ++m) {
        const auto& b = s.machines[m];
        ojson mj;
        mj["pair"] = {s.pairs[m].first, s.pairs[m].second};
        mj["support_vectors"] = matrix_json(b.support_vectors);
        mj["dual_weights"] = b.dual_weights;
        mj["alphas"] = b.alphas;
        mj["support_indices"] = b.support_indices;
        mj["bias"] = b.bias;
        mj["cost"] = b.cost;
        mj["kernel"] = kernel_json(b.kernel);
        mj["converged"] = b.converged;
        mj["iterations"] = b.iterations;
        mj["max_kkt_violation"] = b.max_kkt_violation;
        machines.push_back(std::move(mj));
    }
    j["machines"] = std::move(machines);
    return j;
}

SvmMulticlassModel svm_from(const ojson& j) {
    SvmMulticlassModel s;
    s.n_classes = j.at("n_classes").get<std::size_t>();
    s.n_features = j.at("n_features").get<std::size_t>();
    s.cost = j.at("cost").get<double>();
    s.kernel = kernel_from(j.at("kernel"));
    for (const auto& mj : j.at("machines")) {
        SvmBinaryModel b;
        const auto pair = mj.at("pair").get<std::vector<int>>();
        if (pair.size() != 2) throw ModelError("model file: machine pair must have two classes");
        s.pairs.emplace_back(pair[0], pair[1]);
        b.support_vectors = matrix_from(mj.at("support_vectors"));
        b.dual_weights = mj.at("dual_weights").get<std::vector<double>>();
        b.alphas = mj.at("alphas").get<std::vector<double>>();
        b.support_indices = mj.at("support_indices").get<std::vector<Index>>();
        b.bias = mj.at("bias").get<double>();
        b.cost = mj.at("cost").get<double>();
        b.kernel = kernel_from(mj.at("kernel"));
        b.converged = mj.at("converged").get<bool>();
        b.iterations = mj.at("iterations").get<std::size_t>();
        b.max_kkt_violation = mj.at("max_kkt_violation").get<double>();
        if (static_cast<Eigen::Index>(b.dual_weights.size()) != b.support_vectors.rows()) {
            throw ModelError("model file: support vector count mismatch");
        }
        s.machines.push_back(std::move(b));
    }
    return s;
}

ojson lda_json(const LdaModel& m) {
    ojson means = ojson::array();
    for (const auto& mu : m.class_means) means.push_back(vector_json(mu));
    return {{"class_means", std::move(means)},
            {"pooled_covariance", matrix_json(m.pooled_covariance)},
            {"priors", m.priors},
            {"discriminant_axes", matrix_json(m.discriminant_axes)},
            {"axis_eigenvalues", vector_json(m.axis_eigenvalues)},
            {"between_scatter", matrix_json(m.between_scatter)},
            {"regularization_epsilon", m.regularization_epsilon},
            {"score_coefficients", matrix_json(m.score_coefficients)},
            {"score_offsets", vector_json(m.score_offsets)}};
}

LdaModel lda_from(const ojson& j) {
    LdaModel m;
    for (const auto& mu : j.at("class_means")) m.class_means.push_back(vector_from(mu));
    m.pooled_covariance = matrix_from(j.at("pooled_covariance"));
    m.priors = j.at("priors").get<std::vector<double>>();
    m.discriminant_axes = matrix_from(j.at("discriminant_axes"));
    m.axis_eigenvalues = vector_from(j.at("axis_eigenvalues"));
    m.between_scatter = matrix_from(j.at("between_scatter"));
    m.regularization_epsilon = j.at("regularization_epsilon").get<double>();
    m.score_coefficients = matrix_from(j.at("score_coefficients"));
    m.score_offsets = vector_from(j.at("score_offsets"));
    if (m.score_coefficients.cols() != static_cast<Eigen::Index>(m.c()) ||
        m.score_offsets.size() != static_cast<Eigen::Index>(m.c())) {
        throw ModelError("model file: inconsistent discriminant shapes");
    }
    return m;
}

ojson knn_json(const KnnModel& m) {
    return {{"k", m.k}, {"n_classes", m.n_classes}, {"features", matrix_json(m.features)}, {"labels", m.labels}};
}

KnnModel knn_from(const ojson& j) {
    KnnModel m{matrix_from(j.at("features")), j.at("labels").get<std::vector<int>>(), j.at("n_classes").get<std::size_t>(),
               j.at("k").get<std::size_t>()};
    if (static_cast<Eigen::Index>(m.labels.size()) != m.features.rows()) throw ModelError("model file: label count mismatch");
    return m;
}

ojson logistic_json(const LogisticModel& m) {
    return {{"weights", matrix_json(m.weights)}, {"iterations", m.iterations}, {"final_loss", m.final_loss}};
}

LogisticModel logistic_from(const ojson& j) {
    LogisticModel m;
    m.weights = matrix_from(j.at("weights"));
    m.iterations = j.at("iterations").get<std::size_t>();
    m.final_loss = j.at("final_loss").get<double>();
    return m;
}

ojson nb_json(const NaiveBayesModel& m) {
    return {{"priors", m.priors},
            {"means", matrix_json(m.means)},
            {"variances", matrix_json(m.variances)},
            {"variance_floor", m.variance_floor}};
}

NaiveBayesModel nb_from(const ojson& j) {
    NaiveBayesModel m{j.at("priors").get<std::vector<double>>(), matrix_from(j.at("means")),
                      matrix_from(j.at("variances")), j.at("variance_floor").get<double>()};
    if (m.means.rows() != static_cast<Eigen::Index>(m.c()) || m.variances.rows() != m.means.rows() ||
        m.variances.cols() != m.means.cols()) {
        throw ModelError("model file: inconsistent naive Bayes shapes");
    }
    return m;
}

}  // namespace

int ModelFile::predict(const Eigen::VectorXd& raw) const { return classifier.predict(scaling.apply(raw)); }

nlohmann::ordered_json model_to_json(const ModelFile& file) {
    ojson j;
    j["format_version"] = kFormatVersion;
    j["algorithm"] = algorithm_name(file.classifier.id);
    j["label_name"] = file.label_name;
    j["feature_names"] = file.feature_names;
    j["class_names"] = file.class_names;
    j["scaling"] = {{"means", file.scaling.means}, {"std_devs", file.scaling.std_devs}};
    j["model"] = std::visit(
        [](const auto& m) -> ojson {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DecisionTreeModel>) return tree_json(m);
            else if constexpr (std::is_same_v<T, ForestModel>) return forest_json(m);
            else if constexpr (std::is_same_v<T, MlpModel>) return mlp_json(m);
            else if constexpr (std::is_same_v<T, SvmMulticlassModel>) return svm_json(m);
            else if constexpr (std::is_same_v<T, LdaModel>) return lda_json(m);
            else if constexpr (std::is_same_v<T, KnnModel>) return knn_json(m);
            else if constexpr (std::is_same_v<T, LogisticModel>) return logistic_json(m);
            else return nb_json(m);
        },
        file.classifier.model);
    return j;
}

ModelFile model_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("format_version").get<int>() != kFormatVersion) throw ModelError("model file: unsupported format version");
        ModelFile f;
        const auto name = j.at("algorithm").get<std::string>();
        const auto id = parse_algorithm(name);
        if (!id) throw ModelError("model file: unknown algorithm '" + name + "'");
        f.classifier.id = *id;
        f.label_name = j.at("label_name").get<std::string>();
        f.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        f.class_names = j.at("class_names").get<std::vector<std::string>>();
        f.scaling.means = j.at("scaling").at("means").get<std::vector<double>>();
        f.scaling.std_devs = j.at("scaling").at("std_devs").get<std::vector<double>>();
        if (f.scaling.means.size() != f.feature_names.size() || f.scaling.std_devs.size() != f.feature_names.size()) {
            throw ModelError("model file: scaling does not match the feature list");
        }
        const ojson& m = j.at("model");
        switch (*id) {
            case AlgorithmId::DT: f.classifier.model = tree_from(m); break;
            case AlgorithmId::RF: f.classifier.model = forest_from(m); break;
            case AlgorithmId::ANN: f.classifier.model = mlp_from(m); break;
            case AlgorithmId::SVM: f.classifier.model = svm_from(m); break;
            case AlgorithmId::LDA: f.classifier.model = lda_from(m); break;
            case AlgorithmId::KNN: f.classifier.model = knn_from(m); break;
            case AlgorithmId::LR: f.classifier.model = logistic_from(m); break;
            case AlgorithmId::NB: f.classifier.model = nb_from(m); break;
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("model file: ") + e.what());
    }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << model_to_json(file).dump(1) << "\n";
    if (!out) throw DataError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read model file " + path.string());
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace ecoml

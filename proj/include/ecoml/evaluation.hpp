#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecoml/dataset.hpp"
#include "ecoml/forest.hpp"
#include "ecoml/knn.hpp"
#include "ecoml/lda.hpp"
#include "ecoml/logistic.hpp"
#include "ecoml/metrics.hpp"
#include "ecoml/mlp.hpp"
#include "ecoml/naive_bayes.hpp"
#include "ecoml/svm.hpp"
#include "ecoml/tree.hpp"

namespace ecoml {

enum class AlgorithmId { DT, RF, ANN, SVM, LDA, KNN, LR, NB };

/// Report names: DT, RF, ANN, SVM, LDA, K-NN, LR, NB.
std::string algorithm_name(AlgorithmId id);
/// Case-insensitive; accepts "knn" and "k-nn".
std::optional<AlgorithmId> parse_algorithm(const std::string& name);
const std::vector<AlgorithmId>& all_algorithms();

/// Settings for every learner. Seeds inside are overwritten per run.
struct Hyperparameters {
    TreeParams tree;
    ForestParams forest;
    MlpConfig mlp;
    double svm_cost = 1.0;
    KernelKind svm_kernel = KernelKind::Rbf;
    std::optional<double> svm_gamma;  // 1 / p when empty
    std::size_t knn_k = kDefaultK;
    LogisticConfig logistic;
};

using FittedModel = std::variant<DecisionTreeModel, ForestModel, MlpModel, SvmMulticlassModel, LdaModel, KnnModel,
                                 LogisticModel, NaiveBayesModel>;

/// Any of the eight fitted learners behind one predict call.
struct Classifier {
    AlgorithmId id = AlgorithmId::DT;
    FittedModel model;
    std::optional<TrainTrace> mlp_trace;

    int predict(const Eigen::VectorXd& x) const;
    std::vector<int> predict_all(const Eigen::MatrixXd& x) const;
};

Classifier fit_classifier(const Dataset& ds, AlgorithmId id, const Hyperparameters& hp, std::uint64_t seed);

enum class ProcessKind { Resubstitution, Holdout, CrossValidation };

struct Process {
    ProcessKind kind = ProcessKind::Resubstitution;
    double train_fraction = 0.75;
    std::size_t folds = 3;
    bool stratified = false;  // holdout only

    static Process resubstitution() { return {ProcessKind::Resubstitution}; }
    static Process holdout(double fraction = 0.75) { return {ProcessKind::Holdout, fraction}; }
    static Process cross_validation(std::size_t k = 3) { return {ProcessKind::CrossValidation, 0.75, k}; }
};

/// "I", "II", "III".
std::string process_name(ProcessKind kind);
/// Accepts I/II/III or 1/2/3.
std::optional<ProcessKind> parse_process(const std::string& name);

struct ReportRow {
    AlgorithmId algorithm = AlgorithmId::DT;
    Process process;
    std::uint64_t seed = 0;  // model seed of this cell
    std::optional<ConfusionMatrix> confusion;
    BinaryAggregates aggregates;
    MeasureSet measures;
    double wall_ms = 0.0;
    std::string error;  // nonempty when the cell failed

    bool ok() const { return error.empty(); }
};

struct DatasetSummary {
    std::string source;
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<std::size_t> class_counts;
};

DatasetSummary summarize(const Dataset& ds, std::string source);

struct BenchmarkReport {
    std::uint64_t master_seed = 0;
    DatasetSummary dataset;
    std::vector<ReportRow> rows;

    const ReportRow* find(AlgorithmId algorithm, ProcessKind process) const;
    std::size_t failures() const;
};

/// Split/fold seed, shared by every algorithm under one process.
std::uint64_t partition_seed(std::uint64_t master_seed, ProcessKind kind);
/// Model seed of one (algorithm, process) cell.
std::uint64_t cell_seed(std::uint64_t master_seed, AlgorithmId algorithm, ProcessKind kind);

/// Rows scored by each fitted model: which rows train, which rows test.
struct EvaluationPlan {
    std::vector<IndexList> train;
    std::vector<IndexList> test;
};
EvaluationPlan evaluation_plan(const Dataset& ds, const Process& process, std::uint64_t master_seed);

/// Fits and scores one cell. Learner failures are caught and stored in the
/// row's `error`; the scaling is always fitted on training rows only.
ReportRow run_process(const Dataset& ds, AlgorithmId algorithm, const Process& process, std::uint64_t master_seed,
                      const Hyperparameters& hp = {});

/// All (process, algorithm) cells, process-major. Cells run concurrently when
/// `threads` > 1; the result does not depend on scheduling.
BenchmarkReport run_benchmark(const Dataset& ds, const std::vector<AlgorithmId>& algorithms,
                              const std::vector<Process>& processes, std::uint64_t master_seed,
                              const Hyperparameters& hp = {}, std::size_t threads = 1);

/// Descending accuracy, then F-score, then name. Failed cells go last.
std::vector<AlgorithmId> rank_algorithms(const BenchmarkReport& report, ProcessKind process);

}  // namespace ecoml

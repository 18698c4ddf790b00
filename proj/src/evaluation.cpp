#include "ecoml/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <future>
#include <numeric>

#include "ecoml/random.hpp"

namespace ecoml {

std::string algorithm_name(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::DT: return "DT";
        case AlgorithmId::RF: return "RF";
        case AlgorithmId::ANN: return "ANN";
        case AlgorithmId::SVM: return "SVM";
        case AlgorithmId::LDA: return "LDA";
        case AlgorithmId::KNN: return "K-NN";
        case AlgorithmId::LR: return "LR";
        case AlgorithmId::NB: return "NB";
    }
    return "?";
}

std::optional<AlgorithmId> parse_algorithm(const std::string& name) {
    std::string key;
    for (char ch : name) {
        if (ch != '-' && ch != '_' && ch != ' ') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (key == "dt" || key == "tree") return AlgorithmId::DT;
    if (key == "rf" || key == "forest") return AlgorithmId::RF;
    if (key == "ann" || key == "mlp") return AlgorithmId::ANN;
    if (key == "svm") return AlgorithmId::SVM;
    if (key == "lda") return AlgorithmId::LDA;
    if (key == "knn") return AlgorithmId::KNN;
    if (key == "lr" || key == "logistic") return AlgorithmId::LR;
    if (key == "nb") return AlgorithmId::NB;
    return std::nullopt;
}

const std::vector<AlgorithmId>& all_algorithms() {
    static const std::vector<AlgorithmId> all = {AlgorithmId::DT,  AlgorithmId::RF,  AlgorithmId::ANN, AlgorithmId::SVM,
                                                 AlgorithmId::LDA, AlgorithmId::KNN, AlgorithmId::LR,  AlgorithmId::NB};
    return all;
}

std::string process_name(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Resubstitution: return "I";
        case ProcessKind::Holdout: return "II";
        case ProcessKind::CrossValidation: return "III";
    }
    return "?";
}

std::optional<ProcessKind> parse_process(const std::string& name) {
    if (name == "I" || name == "i" || name == "1") return ProcessKind::Resubstitution;
    if (name == "II" || name == "ii" || name == "2") return ProcessKind::Holdout;
    if (name == "III" || name == "iii" || name == "3") return ProcessKind::CrossValidation;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

int Classifier::predict(const Eigen::VectorXd& x) const {
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DecisionTreeModel>) return predict_tree(m, x);
            else if constexpr (std::is_same_v<T, ForestModel>) return predict_forest(m, x);
            else if constexpr (std::is_same_v<T, MlpModel>) return predict_mlp(m, x);
            else if constexpr (std::is_same_v<T, SvmMulticlassModel>) return predict_svm(m, x);
            else if constexpr (std::is_same_v<T, LdaModel>) return predict_lda(m, x);
            else if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(m, x);
            else if constexpr (std::is_same_v<T, LogisticModel>) return predict_logistic(m, x);
            else return predict_nb(m, x);
        },
        model);
}

std::vector<int> Classifier::predict_all(const Eigen::MatrixXd& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(x.row(i).transpose());
    return out;
}

Classifier fit_classifier(const Dataset& ds, AlgorithmId id, const Hyperparameters& hp, std::uint64_t seed) {
    Classifier c;
    c.id = id;
    switch (id) {
        case AlgorithmId::DT: c.model = fit_decision_tree(ds, hp.tree); break;
        case AlgorithmId::RF: {
            ForestParams fp = hp.forest;
            fp.seed = seed;
            c.model = fit_random_forest(ds, fp);
            break;
        }
        case AlgorithmId::ANN: {
            MlpConfig cfg = hp.mlp;
            cfg.seed = seed;
            auto [model, trace] = fit_mlp(ds, cfg);
            c.model = std::move(model);
            c.mlp_trace = std::move(trace);
            break;
        }
        case AlgorithmId::SVM: {
            SvmParams sp;
            sp.cost = hp.svm_cost;
            sp.kernel = hp.svm_kernel == KernelKind::Linear ? KernelSpec::linear()
                                                            : KernelSpec::rbf(hp.svm_gamma.value_or(default_gamma(ds.p())));
            c.model = fit_svm_multiclass(ds, sp);
            break;
        }
        case AlgorithmId::LDA: c.model = fit_lda(ds); break;
        case AlgorithmId::KNN: c.model = fit_knn(ds, hp.knn_k); break;
        case AlgorithmId::LR: c.model = fit_logistic(ds, hp.logistic); break;
        case AlgorithmId::NB: c.model = fit_naive_bayes(ds); break;
    }
    return c;
}

// ---------------------------------------------------------------------------

DatasetSummary summarize(const Dataset& ds, std::string source) {
    return {std::move(source), ds.n(), ds.p(), ds.feature_names(), ds.class_names(), ds.class_counts()};
}

const ReportRow* BenchmarkReport::find(AlgorithmId algorithm, ProcessKind process) const {
    for (const auto& r : rows) {
        if (r.algorithm == algorithm && r.process.kind == process) return &r;
    }
    return nullptr;
}

std::size_t BenchmarkReport::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.ok(); }));
}

std::uint64_t partition_seed(std::uint64_t master_seed, ProcessKind kind) {
    return derive_seed(master_seed, {0x5041525449ULL, static_cast<std::uint64_t>(kind)});
}

std::uint64_t cell_seed(std::uint64_t master_seed, AlgorithmId algorithm, ProcessKind kind) {
    return derive_seed(master_seed,
                       {0x4d4f44454cULL, static_cast<std::uint64_t>(algorithm), static_cast<std::uint64_t>(kind)});
}

EvaluationPlan evaluation_plan(const Dataset& ds, const Process& process, std::uint64_t master_seed) {
    EvaluationPlan plan;
    const std::uint64_t seed = partition_seed(master_seed, process.kind);
    switch (process.kind) {
        case ProcessKind::Resubstitution: {
            IndexList all(ds.n());
            std::iota(all.begin(), all.end(), Index{0});
            plan.train.push_back(all);
            plan.test.push_back(all);
            break;
        }
        case ProcessKind::Holdout: {
            auto s = split_indices(ds, process.train_fraction, seed, process.stratified);
            plan.train.push_back(std::move(s.train));
            plan.test.push_back(std::move(s.test));
            break;
        }
        case ProcessKind::CrossValidation: {
            const FoldPlan folds = k_fold(ds, process.folds, seed);
            for (std::size_t f = 0; f < folds.k(); ++f) {
                plan.train.push_back(folds.complement(f, ds.n()));
                plan.test.push_back(folds.folds[f]);
            }
            break;
        }
    }
    return plan;
}

ReportRow run_process(const Dataset& ds, AlgorithmId algorithm, const Process& process, std::uint64_t master_seed,
                      const Hyperparameters& hp) {
    ReportRow row;
    row.algorithm = algorithm;
    row.process = process;
    row.seed = cell_seed(master_seed, algorithm, process.kind);
    const auto start = std::chrono::steady_clock::now();
    try {
        const EvaluationPlan plan = evaluation_plan(ds, process, master_seed);
        std::vector<int> actual;
        std::vector<int> predicted;
        for (std::size_t part = 0; part < plan.train.size(); ++part) {
            const Dataset train = ds.subset(plan.train[part]);
            const Dataset test = ds.subset(plan.test[part]);
            const ScalingParams scaling = fit_scaling(train);
            const std::uint64_t seed = plan.train.size() == 1 ? row.seed : derive_seed(row.seed, {part});
            const Classifier model = fit_classifier(scaling.apply(train), algorithm, hp, seed);
            const auto pred = model.predict_all(scaling.apply(test.features()));
            actual.insert(actual.end(), test.labels().begin(), test.labels().end());
            predicted.insert(predicted.end(), pred.begin(), pred.end());
        }
        // Cross-validation pools the out-of-fold predictions into one matrix.
        row.confusion = confusion_matrix(actual, predicted, ds.c());
        row.aggregates = macro_aggregate(*row.confusion);
        row.measures = measures(row.aggregates);
    } catch (const std::exception& e) {
        row.error = e.what();
        row.confusion.reset();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

BenchmarkReport run_benchmark(const Dataset& ds, const std::vector<AlgorithmId>& algorithms,
                              const std::vector<Process>& processes, std::uint64_t master_seed,
                              const Hyperparameters& hp, std::size_t threads) {
    if (algorithms.empty()) throw ModelError("benchmark needs at least one algorithm");
    if (processes.empty()) throw ModelError("benchmark needs at least one process");

    BenchmarkReport report;
    report.master_seed = master_seed;
    report.dataset = summarize(ds, "");

    struct Cell {
        AlgorithmId algorithm;
        Process process;
    };
    std::vector<Cell> cells;
    for (const auto& proc : processes) {
        for (auto a : algorithms) cells.push_back({a, proc});
    }
    report.rows.resize(cells.size());

    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            report.rows[i] = run_process(ds, cells[i].algorithm, cells[i].process, master_seed, hp);
        }
        return report;
    }
    // Work is claimed in index order and written back by index.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            report.rows[i] = run_process(ds, cells[i].algorithm, cells[i].process, master_seed, hp);
        }
    };
    std::vector<std::future<void>> pool;
    for (std::size_t t = 0; t < std::min(threads, cells.size()); ++t) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    return report;
}

std::vector<AlgorithmId> rank_algorithms(const BenchmarkReport& report, ProcessKind process) {
    std::vector<const ReportRow*> rows;
    for (const auto& r : report.rows) {
        if (r.process.kind == process) rows.push_back(&r);
    }
    if (rows.empty()) throw ModelError("report has no rows for process " + process_name(process));
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow* a, const ReportRow* b) {
        if (a->ok() != b->ok()) return a->ok();
        if (a->ok()) {
            if (a->measures.accuracy != b->measures.accuracy) return a->measures.accuracy > b->measures.accuracy;
            if (a->measures.f_score != b->measures.f_score) return a->measures.f_score > b->measures.f_score;
        }
        return algorithm_name(a->algorithm) < algorithm_name(b->algorithm);
    });
    std::vector<AlgorithmId> out;
    for (const auto* r : rows) out.push_back(r->algorithm);
    return out;
}

}  // namespace ecoml

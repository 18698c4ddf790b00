#include "ecoml/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ecoml/model_io.hpp"
#include "ecoml/report_io.hpp"

namespace ecoml {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v, int digits = 8) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

SyntheticSpec synthetic_spec(const RunConfig& config) {
    SyntheticSpec spec;
    spec.n_per_class = config.n_per_class;
    spec.separation = config.separation;
    spec.seed = config.seed;
    return spec;
}

/// Writes to the --out file when given, otherwise to `fallback`.
void emit(const RunConfig& config, const std::string& text, std::ostream& fallback) {
    if (!config.out) {
        fallback << text;
        return;
    }
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) throw DataError("cannot write " + config.out->string());
    file << text;
    if (!file) throw DataError("failed writing " + config.out->string());
}

std::vector<AlgorithmId> selected_algorithms(const RunConfig& config) {
    if (config.algorithms.empty()) return all_algorithms();
    std::vector<AlgorithmId> out;
    for (const auto& name : config.algorithms) {
        const auto id = parse_algorithm(name);
        if (!id) throw UsageError("unknown algorithm '" + name + "' (expected dt, rf, ann, svm, lda, knn, lr, nb)");
        if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
    }
    return out;
}

std::vector<Process> selected_processes(const RunConfig& config) {
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw UsageError("--train-fraction must lie strictly between 0 and 1");
    }
    if (config.folds < 2) throw UsageError("--folds must be at least 2");
    const std::vector<std::string> names = config.processes.empty() ? std::vector<std::string>{"I", "II", "III"}
                                                                    : config.processes;
    std::vector<Process> out;
    for (const auto& name : names) {
        const auto kind = parse_process(name);
        if (!kind) throw UsageError("unknown process '" + name + "' (expected I, II or III)");
        Process p{*kind, config.train_fraction, config.folds, config.stratified};
        if (std::none_of(out.begin(), out.end(), [&](const Process& q) { return q.kind == p.kind; })) out.push_back(p);
    }
    return out;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
}

std::string trace_csv(const Classifier& c, const Dataset& train, const Hyperparameters& hp, std::uint64_t seed) {
    std::ostringstream out;
    if (c.mlp_trace) {
        out << "epoch,sse\n";
        for (std::size_t i = 0; i < c.mlp_trace->sse.size(); ++i) out << i + 1 << ',' << num(c.mlp_trace->sse[i], 17) << "\n";
    } else if (const auto* f = std::get_if<ForestModel>(&c.model)) {
        const auto resub = forest_error_trace(*f, train);
        // Holdout curve: a second forest on the 75% split, scored on the rest.
        const auto split = split_indices(train, 0.75, seed);
        const Dataset part = train.subset(split.train);
        const ScalingParams scaling = fit_scaling(part);
        ForestParams fp = hp.forest;
        fp.seed = seed;
        const ForestModel held = fit_random_forest(scaling.apply(part), fp);
        const auto holdout = forest_error_trace(held, scaling.apply(train.subset(split.test)));
        out << "trees,resubstitution_error,holdout_error\n";
        for (std::size_t t = 0; t < resub.size(); ++t) {
            out << t + 1 << ',' << num(resub[t], 17) << ',' << num(holdout[t], 17) << "\n";
        }
    } else {
        throw UsageError("--trace is available for ann and rf only");
    }
    return out.str();
}

void print_fit_summary(const Classifier& c, const Dataset& train, std::ostream& out) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SvmMulticlassModel>) {
                for (const auto& field : svm_summary(m, train.class_names())) out << field.name << "\t" << field.value << "\n";
            } else if constexpr (std::is_same_v<T, LdaModel>) {
                out << "Variable";
                for (Eigen::Index a = 0; a < m.discriminant_axes.cols(); ++a) out << "\tLD" << a + 1;
                out << "\n";
                for (const auto& row : lda_axes_table(m, train.feature_names())) {
                    out << row.feature;
                    for (double v : row.coefficients) out << "\t" << num(v);
                    out << "\n";
                }
            } else if constexpr (std::is_same_v<T, ForestModel>) {
                out << "Variable\tMean Decrease Gini\n";
                for (std::size_t f = 0; f < m.importance.size(); ++f) {
                    out << train.feature_names()[f] << "\t" << num(m.importance[f]) << "\n";
                }
            } else if constexpr (std::is_same_v<T, MlpModel>) {
                out << "Error: " << num(c.mlp_trace->sse.empty() ? 0.0 : c.mlp_trace->sse.back(), 7)
                    << " Steps: " << c.mlp_trace->steps << "\n";
            } else if constexpr (std::is_same_v<T, DecisionTreeModel>) {
                const auto leaves = std::count_if(m.nodes.begin(), m.nodes.end(), [](const TreeNode& n) { return n.leaf; });
                out << "Nodes: " << m.nodes.size() << " Leaves: " << leaves << " Depth: " << m.depth() << "\n";
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                out << "Loss: " << num(m.final_loss) << " Iterations: " << m.iterations << "\n";
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                out << "k: " << m.k << " Training rows: " << m.n() << "\n";
            } else {
                out << "Class\tPrior\n";
                for (std::size_t j = 0; j < m.c(); ++j) out << train.class_names()[j] << "\t" << num(m.priors[j]) << "\n";
            }
        },
        c.model);
}

}  // namespace

Dataset load_source(const RunConfig& config, std::string* description) {
    if (config.data.has_value() == config.synthetic) {
        throw UsageError("give exactly one dataset source: --data PATH or --synthetic");
    }
    if (config.synthetic) {
        if (config.n_per_class < 1) throw UsageError("--n-per-class must be positive");
        if (description) {
            *description = "synthetic(n_per_class=" + std::to_string(config.n_per_class) +
                           ", separation=" + num(config.separation) + ", seed=" + std::to_string(config.seed) + ")";
        }
        return generate_ecological(synthetic_spec(config));
    }
    if (description) *description = config.data->string();
    return load_csv(*config.data, config.label);
}

Hyperparameters hyperparameters_from(const RunConfig& config) {
    Hyperparameters hp;
    if (config.k) hp.knn_k = *config.k;
    if (config.trees) {
        if (*config.trees < 1) throw UsageError("--trees must be positive");
        hp.forest.n_trees = *config.trees;
    }
    if (config.hidden) hp.mlp.hidden_units = *config.hidden;
    if (config.epochs) hp.mlp.epochs = *config.epochs;
    if (config.cost) {
        if (!(*config.cost > 0.0)) throw UsageError("--cost must be positive");
        hp.svm_cost = *config.cost;
    }
    if (config.kernel) {
        if (*config.kernel == "linear") hp.svm_kernel = KernelKind::Linear;
        else if (*config.kernel == "radial" || *config.kernel == "rbf") hp.svm_kernel = KernelKind::Rbf;
        else throw UsageError("unknown kernel '" + *config.kernel + "' (expected linear or radial)");
    }
    if (config.gamma) {
        if (!(*config.gamma > 0.0)) throw UsageError("--gamma must be positive");
        hp.svm_gamma = *config.gamma;
    }
    if (config.max_depth) hp.tree.max_depth = *config.max_depth;
    return hp;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto format = parse_report_format(config.format);
        if (!format) throw UsageError("unknown format '" + config.format + "' (expected json, markdown or csv)");
        const auto algorithms = selected_algorithms(config);
        const auto processes = selected_processes(config);
        const Hyperparameters hp = hyperparameters_from(config);
        std::string source;
        const Dataset ds = load_source(config, &source);

        BenchmarkReport report = run_benchmark(ds, algorithms, processes, config.seed, hp, config.threads);
        report.dataset.source = source;
        emit(config, format_report(report, *format, config.timings), out);

        // Without --out the report owns stdout, so the ranking moves to stderr.
        std::ostream& rank_stream = config.out ? out : err;
        rank_stream << format_ranking(report);
        for (const auto& r : report.rows) {
            if (!r.ok()) err << algorithm_name(r.algorithm) << " / " << process_name(r.process.kind) << ": " << r.error << "\n";
        }
        return report.failures() == 0 ? kExitOk : kExitCellFailure;
    });
}

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.algorithm.empty()) throw UsageError("fit needs --algorithm");
        const auto id = parse_algorithm(config.algorithm);
        if (!id) throw UsageError("unknown algorithm '" + config.algorithm + "'");
        if (!config.model) throw UsageError("fit needs --model PATH for the output model file");
        if (config.trace && *id != AlgorithmId::ANN && *id != AlgorithmId::RF) {
            throw UsageError("--trace is available for ann and rf only");
        }
        const Hyperparameters hp = hyperparameters_from(config);
        const Dataset ds = load_source(config);

        ModelFile file;
        file.scaling = fit_scaling(ds);
        const Dataset train = file.scaling.apply(ds);
        file.classifier = fit_classifier(train, *id, hp, config.seed);
        file.feature_names = ds.feature_names();
        file.class_names = ds.class_names();
        file.label_name = ds.label_name();
        save_model(file, *config.model);

        print_fit_summary(file.classifier, train, out);
        if (config.trace) {
            std::ofstream t(*config.trace, std::ios::binary);
            if (!t) throw DataError("cannot write " + config.trace->string());
            t << trace_csv(file.classifier, train, hp, config.seed);
        }
        return kExitOk;
    });
}

int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!config.model) throw UsageError("predict needs --model PATH");
        if (!config.data) throw UsageError("predict needs --data PATH");
        if (config.synthetic) throw UsageError("predict reads --data only");
        const ModelFile file = load_model(*config.model);
        const NumericTable table = load_numeric_csv(*config.data, {file.label_name});
        const std::size_t p = file.feature_names.size();
        if (table.columns.size() != p) {
            throw DataError("feature count mismatch: model expects p = " + std::to_string(p) + " features, found " +
                            std::to_string(table.columns.size()) + " in " + config.data->string());
        }
        // Columns are matched by name when all names are present, else by position.
        std::vector<Eigen::Index> order(p);
        bool by_name = true;
        for (std::size_t f = 0; f < p && by_name; ++f) {
            const auto it = std::find(table.columns.begin(), table.columns.end(), file.feature_names[f]);
            if (it == table.columns.end()) by_name = false;
            else order[f] = it - table.columns.begin();
        }
        if (!by_name) {
            for (std::size_t f = 0; f < p; ++f) order[f] = static_cast<Eigen::Index>(f);
            err << "warning: column names differ from the model's; matching columns by position\n";
        }

        std::ostringstream text;
        text << file.label_name << "\n";
        Eigen::VectorXd row(static_cast<Eigen::Index>(p));
        for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
            for (std::size_t f = 0; f < p; ++f) row(static_cast<Eigen::Index>(f)) = table.values(r, order[f]);
            text << file.class_names.at(static_cast<std::size_t>(file.predict(row))) << "\n";
        }
        emit(config, text.str(), out);
        return kExitOk;
    });
}

int cmd_gen_data(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.data) throw UsageError("gen-data takes no --data");
        if (config.n_per_class < 1) throw UsageError("--n-per-class must be positive");
        emit(config, to_csv(generate_ecological(synthetic_spec(config))), out);
        return kExitOk;
    });
}

int cmd_inspect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Dataset ds = load_source(config);
        const Eigen::MatrixXd& x = ds.features();
        const auto n = static_cast<double>(ds.n());
        const Eigen::RowVectorXd mean = x.colwise().mean();
        const Eigen::MatrixXd centred = x.rowwise() - mean;
        Eigen::MatrixXd cov = centred.transpose() * centred / (ds.n() > 1 ? n - 1.0 : 1.0);
        cov = (0.5 * (cov + cov.transpose())).eval();

        std::ostringstream text;
        text << "feature,mean,std,min,max\n";
        for (std::size_t f = 0; f < ds.p(); ++f) {
            const auto i = static_cast<Eigen::Index>(f);
            text << ds.feature_names()[f] << ',' << num(mean(i), 10) << ',' << num(std::sqrt(cov(i, i)), 10) << ','
                 << num(x.col(i).minCoeff(), 10) << ',' << num(x.col(i).maxCoeff(), 10) << "\n";
        }
        text << "\nclass,count\n";
        const auto counts = ds.class_counts();
        for (std::size_t j = 0; j < ds.c(); ++j) text << ds.class_names()[j] << ',' << counts[j] << "\n";

        // Constant columns have no defined correlation; they are reported as 0
        // off the diagonal.
        text << "\ncorrelation";
        for (const auto& name : ds.feature_names()) text << ',' << name;
        text << "\n";
        for (std::size_t a = 0; a < ds.p(); ++a) {
            text << ds.feature_names()[a];
            for (std::size_t b = 0; b < ds.p(); ++b) {
                const auto ia = static_cast<Eigen::Index>(a);
                const auto ib = static_cast<Eigen::Index>(b);
                double r = 0.0;
                if (a == b) r = 1.0;
                else if (cov(ia, ia) > 0.0 && cov(ib, ib) > 0.0) {
                    r = std::clamp(cov(ia, ib) / std::sqrt(cov(ia, ia) * cov(ib, ib)), -1.0, 1.0);
                }
                text << ',' << num(r, 10);
            }
            text << "\n";
        }
        emit(config, text.str(), out);
        return kExitOk;
    });
}

}  // namespace ecoml

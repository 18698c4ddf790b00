// ecoml: benchmark eight classifiers on ecological survey data.

#include <iostream>

#include "CLI11.hpp"
#include "ecoml/commands.hpp"

namespace {

using ecoml::RunConfig;

void add_source(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--data", cfg.data, "CSV file with a header row");
    cmd->add_option("--label", cfg.label, "Name of the class column")->capture_default_str();
    cmd->add_flag("--synthetic", cfg.synthetic, "Use the generated sea-bed survey instead of --data");
}

void add_synthetic(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--n-per-class", cfg.n_per_class, "Rows per class of the generated survey")->capture_default_str();
    cmd->add_option("--separation", cfg.separation, "Gap between adjacent class means, in spreads")
        ->capture_default_str();
}

void add_hyperparameters(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--k", cfg.k, "Neighbours for k-NN (default 5)");
    cmd->add_option("--trees", cfg.trees, "Trees in the random forest (default 500)");
    cmd->add_option("--hidden", cfg.hidden, "Hidden units of the network (default 5)");
    cmd->add_option("--epochs", cfg.epochs, "Maximum training epochs of the network (default 2000)");
    cmd->add_option("--cost", cfg.cost, "SVM cost (default 1)");
    cmd->add_option("--kernel", cfg.kernel, "SVM kernel: radial or linear (default radial)");
    cmd->add_option("--gamma", cfg.gamma, "SVM radial width (default 1/p)");
    cmd->add_option("--max-depth", cfg.max_depth, "Depth limit of the decision tree (default none)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecoml: compare eight supervised classifiers on ecological data"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* bench = app.add_subcommand("bench", "Run algorithms x evaluation processes and write a report");
    add_source(bench, cfg);
    add_synthetic(bench, cfg);
    add_hyperparameters(bench, cfg);
    bench->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    bench->add_option("--algorithms", cfg.algorithms, "Comma list: dt,rf,ann,svm,lda,knn,lr,nb")->delimiter(',');
    bench->add_option("--processes", cfg.processes, "Comma list of I,II,III")->delimiter(',');
    bench->add_option("--train-fraction", cfg.train_fraction, "Training share in process II")->capture_default_str();
    bench->add_option("--folds", cfg.folds, "Folds in process III")->capture_default_str();
    bench->add_flag("--stratified", cfg.stratified, "Stratify the process II split by class");
    bench->add_option("--threads", cfg.threads, "Cells evaluated concurrently")->capture_default_str();
    bench->add_option("--format", cfg.format, "json, markdown or csv")->capture_default_str();
    bench->add_option("--out", cfg.out, "Report file (stdout when omitted)");
    bench->add_flag("--timings", cfg.timings, "Record wall-clock time per cell");

    auto* fit = app.add_subcommand("fit", "Fit one algorithm on standardized data and save it");
    add_source(fit, cfg);
    add_synthetic(fit, cfg);
    add_hyperparameters(fit, cfg);
    fit->add_option("--seed", cfg.seed, "Model seed")->capture_default_str();
    fit->add_option("--algorithm", cfg.algorithm, "dt, rf, ann, svm, lda, knn, lr or nb")->required();
    fit->add_option("--model", cfg.model, "Output model file (JSON)")->required();
    fit->add_option("--trace", cfg.trace, "Training trace CSV (ann: epoch,sse; rf: trees,resubstitution_error,holdout_error)");

    auto* predict = app.add_subcommand("predict", "Label the rows of a CSV with a saved model");
    predict->add_option("--model", cfg.model, "Model file written by fit")->required();
    predict->add_option("--data", cfg.data, "Feature CSV; a label column is ignored")->required();
    predict->add_option("--out", cfg.out, "Predictions CSV (stdout when omitted)");

    auto* gen = app.add_subcommand("gen-data", "Write the synthetic sea-bed survey as CSV");
    add_synthetic(gen, cfg);
    gen->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", cfg.out, "CSV file (stdout when omitted)");

    auto* inspect = app.add_subcommand("inspect", "Per-feature statistics, class counts, correlations");
    add_source(inspect, cfg);
    add_synthetic(inspect, cfg);
    inspect->add_option("--seed", cfg.seed, "Generator seed for --synthetic")->capture_default_str();
    inspect->add_option("--out", cfg.out, "Summary file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ecoml::kExitFatal;
    }

    if (*bench) return ecoml::cmd_bench(cfg, std::cout, std::cerr);
    if (*fit) return ecoml::cmd_fit(cfg, std::cout, std::cerr);
    if (*predict) return ecoml::cmd_predict(cfg, std::cout, std::cerr);
    if (*gen) return ecoml::cmd_gen_data(cfg, std::cout, std::cerr);
    return ecoml::cmd_inspect(cfg, std::cout, std::cerr);
}

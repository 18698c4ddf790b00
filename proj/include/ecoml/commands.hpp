#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecoml/evaluation.hpp"

namespace ecoml {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Everything a subcommand needs. Commands read nothing else.
struct RunConfig {
    std::optional<std::filesystem::path> data;
    std::string label = "sediment";
    bool synthetic = false;
    std::size_t n_per_class = 10;
    double separation = SyntheticSpec{}.separation;
    std::uint64_t seed = kDefaultSeed;

    std::vector<std::string> algorithms;  // all eight when empty
    std::vector<std::string> processes;   // I, II, III when empty
    double train_fraction = 0.75;
    std::size_t folds = 3;
    bool stratified = false;
    std::size_t threads = 1;

    std::string format = "json";
    std::optional<std::filesystem::path> out;
    bool timings = false;

    std::optional<std::filesystem::path> model;
    std::string algorithm;
    std::optional<std::filesystem::path> trace;

    std::optional<std::size_t> k;
    std::optional<std::size_t> trees;
    std::optional<std::size_t> hidden;
    std::optional<std::size_t> epochs;
    std::optional<double> cost;
    std::optional<std::string> kernel;
    std::optional<double> gamma;
    std::optional<std::size_t> max_depth;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitCellFailure = 2;

/// Each command writes results to `out` (or the --out file) and diagnostics
/// to `err`, and returns an exit code instead of throwing.
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gen_data(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_inspect(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The dataset named by the config: --data or --synthetic, exactly one.
Dataset load_source(const RunConfig& config, std::string* description = nullptr);

Hyperparameters hyperparameters_from(const RunConfig& config);

}  // namespace ecoml

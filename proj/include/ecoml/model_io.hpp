#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ecoml/evaluation.hpp"
#include "json.hpp"

namespace ecoml {

/// A fitted classifier together with the schema and scaling it expects.
struct ModelFile {
    Classifier classifier;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::string label_name;
    ScalingParams scaling;

    /// Scales a raw feature row, then predicts.
    int predict(const Eigen::VectorXd& raw) const;
};

/// Doubles are written with round-trip precision, so a reloaded model
/// predicts exactly like the original. Tree nodes nest as left/right records.
nlohmann::ordered_json model_to_json(const ModelFile& file);
ModelFile model_from_json(const nlohmann::ordered_json& j);

void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace ecoml

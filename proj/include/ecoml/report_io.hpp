#pragma once

#include <optional>
#include <string>

#include "ecoml/evaluation.hpp"
#include "json.hpp"

namespace ecoml {

enum class ReportFormat { Json, Markdown, Csv };

std::optional<ReportFormat> parse_report_format(const std::string& name);

/// Canonical report record. `wall_ms` is null unless `with_timings`, so that
/// reruns serialize to identical bytes.
nlohmann::ordered_json report_to_json(const BenchmarkReport& report, bool with_timings = false);

/// JSON, or a markdown/CSV table projected from the same record. Columns
/// follow the order Algorithm, Process, Tp, Fp, Tn, Fn, Recall, Precision,
/// Accuracy, F-Score.
std::string format_report(const BenchmarkReport& report, ReportFormat format, bool with_timings = false);

/// One line per process: algorithms from best to worst with their accuracy.
std::string format_ranking(const BenchmarkReport& report);

}  // namespace ecoml

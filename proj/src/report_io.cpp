#include "ecoml/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ecoml {

std::optional<ReportFormat> parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    if (name == "csv") return ReportFormat::Csv;
    return std::nullopt;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson summary_json(const DatasetSummary& s) {
    ojson j;
    j["source"] = s.source;
    j["n"] = s.n;
    j["p"] = s.p;
    j["feature_names"] = s.feature_names;
    j["class_names"] = s.class_names;
    j["class_counts"] = s.class_counts;
    return j;
}

ojson row_json(const ReportRow& r, bool with_timings) {
    ojson j;
    j["algorithm"] = algorithm_name(r.algorithm);
    j["process"] = process_name(r.process.kind);
    if (r.ok()) {
        j["tp"] = r.aggregates.tp;
        j["fp"] = r.aggregates.fp;
        j["tn"] = r.aggregates.tn;
        j["fn"] = r.aggregates.fn;
        j["recall"] = r.measures.recall;
        j["precision"] = r.measures.precision;
        j["accuracy"] = r.measures.accuracy;
        j["f_score"] = r.measures.f_score;
    } else {
        for (const char* key : {"tp", "fp", "tn", "fn", "recall", "precision", "accuracy", "f_score"}) j[key] = nullptr;
    }
    j["wall_ms"] = with_timings ? ojson(r.wall_ms) : ojson(nullptr);
    j["seed"] = r.seed;
    switch (r.process.kind) {
        case ProcessKind::Resubstitution: break;
        case ProcessKind::Holdout:
            j["train_fraction"] = r.process.train_fraction;
            j["stratified"] = r.process.stratified;
            break;
        case ProcessKind::CrossValidation: j["folds"] = r.process.folds; break;
    }
    if (r.confusion) {
        ojson cm = ojson::array();
        for (std::size_t a = 0; a < r.confusion->classes(); ++a) {
            ojson line = ojson::array();
            for (std::size_t b = 0; b < r.confusion->classes(); ++b) line.push_back(r.confusion->at(a, b));
            cm.push_back(std::move(line));
        }
        j["confusion"] = std::move(cm);
    } else {
        j["confusion"] = nullptr;
    }
    j["error"] = r.ok() ? ojson(nullptr) : ojson(r.error);
    return j;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

nlohmann::ordered_json report_to_json(const BenchmarkReport& report, bool with_timings) {
    ojson j;
    j["seed"] = report.master_seed;
    j["dataset_summary"] = summary_json(report.dataset);
    ojson rows = ojson::array();
    for (const auto& r : report.rows) rows.push_back(row_json(r, with_timings));
    j["rows"] = std::move(rows);
    return j;
}

std::string format_report(const BenchmarkReport& report, ReportFormat format, bool with_timings) {
    const ojson j = report_to_json(report, with_timings);
    if (format == ReportFormat::Json) return j.dump(2) + "\n";

    static const char* const keys[] = {"tp", "fp", "tn", "fn", "recall", "precision", "accuracy", "f_score"};
    std::ostringstream out;
    if (format == ReportFormat::Markdown) {
        out << "# Benchmark report\n\nseed: " << report.master_seed << "  \ndataset: " << report.dataset.source << " (n="
            << report.dataset.n << ", p=" << report.dataset.p << ", classes=" << report.dataset.class_names.size()
            << ")\n";
        std::string current;
        for (const auto& row : j["rows"]) {
            const std::string proc = row["process"].get<std::string>();
            if (proc != current) {
                current = proc;
                out << "\n## Process " << proc << "\n\n"
                    << "| Algorithm | Tp | Fp | Tn | Fn | Recall | Precision | Accuracy | F-Score |"
                    << (with_timings ? " ms |" : "") << "\n"
                    << "|---|---|---|---|---|---|---|---|---|" << (with_timings ? "---|" : "") << "\n";
            }
            out << "| " << row["algorithm"].get<std::string>() << " |";
            for (const char* k : keys) out << ' ' << (row[k].is_null() ? std::string("failed") : fixed4(row[k].get<double>())) << " |";
            if (with_timings) out << ' ' << fixed4(row["wall_ms"].get<double>()) << " |";
            out << "\n";
        }
        for (const auto& row : j["rows"]) {
            if (!row["error"].is_null()) {
                out << "\n" << row["algorithm"].get<std::string>() << " / " << row["process"].get<std::string>()
                    << " failed: " << row["error"].get<std::string>() << "\n";
            }
        }
        return out.str();
    }

    out << "algorithm,process,tp,fp,tn,fn,recall,precision,accuracy,f_score,wall_ms,seed,error\n";
    for (const auto& row : j["rows"]) {
        out << row["algorithm"].get<std::string>() << ',' << row["process"].get<std::string>();
        for (const char* k : keys) out << ',' << (row[k].is_null() ? std::string() : row[k].dump());
        out << ',' << (row["wall_ms"].is_null() ? std::string() : row["wall_ms"].dump()) << ',' << row["seed"].dump()
            << ',';
        if (!row["error"].is_null()) {
            std::string e = row["error"].get<std::string>();
            std::string quoted = "\"";
            for (char ch : e) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out << quoted << '"';
        }
        out << "\n";
    }
    return out.str();
}

std::string format_ranking(const BenchmarkReport& report) {
    std::ostringstream out;
    std::vector<ProcessKind> seen;
    for (const auto& r : report.rows) {
        if (std::find(seen.begin(), seen.end(), r.process.kind) == seen.end()) seen.push_back(r.process.kind);
    }
    for (auto kind : seen) {
        out << "Process " << process_name(kind) << ":";
        bool first = true;
        for (auto id : rank_algorithms(report, kind)) {
            const ReportRow* r = report.find(id, kind);
            out << (first ? " " : " > ") << algorithm_name(id) << " ("
                << (r && r->ok() ? fixed4(r->measures.accuracy) : std::string("failed")) << ")";
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace ecoml

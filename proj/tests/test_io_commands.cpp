#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ecoml/commands.hpp"
#include "ecoml/model_io.hpp"
#include "ecoml/report_io.hpp"
#include "oracles.hpp"

using namespace ecoml;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ecoml_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) out.push_back(c);
    return out;
}

/// Rows of the CSV block that starts with a line beginning `head`.
std::vector<std::vector<std::string>> block(const std::string& text, const std::string& head) {
    std::vector<std::vector<std::string>> out;
    bool inside = false;
    for (const auto& line : lines_of(text)) {
        if (!inside) {
            inside = line.rfind(head, 0) == 0;
            if (inside) out.push_back(cells(line));
            continue;
        }
        if (line.empty()) break;
        out.push_back(cells(line));
    }
    return out;
}

RunConfig synthetic_config() {
    RunConfig c;
    c.synthetic = true;
    return c;
}

}  // namespace

TEST_CASE("every model type survives a save and load") {
    const Dataset raw = oracle::blobs(12, 3, 3, 19, 2.0);
    const ScalingParams scaling = fit_scaling(raw);
    const Dataset z = scaling.apply(raw);
    const auto probes = oracle::blobs(20, 3, 2, 77, 4.0).features();
    for (AlgorithmId id : all_algorithms()) {
        INFO(algorithm_name(id));
        ModelFile file;
        file.classifier = fit_classifier(z, id, {}, 5);
        file.feature_names = raw.feature_names();
        file.class_names = raw.class_names();
        file.label_name = "kind";
        file.scaling = scaling;
        const auto path = scratch("model_" + algorithm_name(id) + ".json");
        save_model(file, path);
        const ModelFile back = load_model(path);
        CHECK(back.classifier.id == id);
        CHECK(back.feature_names == file.feature_names);
        CHECK(back.class_names == file.class_names);
        CHECK(back.label_name == "kind");
        for (Eigen::Index r = 0; r < probes.rows(); ++r) {
            const Eigen::VectorXd x = probes.row(r).transpose();
            CHECK(back.predict(x) == file.predict(x));
        }
        CHECK(model_to_json(back).dump() == model_to_json(file).dump());
    }
}

TEST_CASE("corrupt model files are rejected") {
    const auto path = scratch("broken.json");
    std::ofstream(path) << "{\"format_version\": 1, \"algorithm\": \"LDA\"}";
    CHECK_THROWS_AS(load_model(path), ModelError);
    std::ofstream(path) << "not json";
    CHECK_THROWS_AS(load_model(path), ModelError);
    CHECK_THROWS(load_model(scratch("absent.json")));
}

TEST_CASE("report serialization") {
    const Dataset ds = generate_ecological({});
    auto report = run_benchmark(ds, {AlgorithmId::LDA, AlgorithmId::NB}, {Process::resubstitution(), Process::holdout()}, 42);
    report.dataset.source = "synthetic";
    const auto j = report_to_json(report);
    CHECK(j["seed"] == 42);
    CHECK(j["dataset_summary"]["n"] == 30);
    CHECK(j["dataset_summary"]["p"] == 8);
    CHECK(j["dataset_summary"]["class_names"].size() == 3);
    REQUIRE(j["rows"].size() == 4);
    std::vector<std::string> keys;
    for (const auto& [key, value] : j["rows"][0].items()) keys.push_back(key);
    const std::vector<std::string> leading{"algorithm", "process", "tp", "fp", "tn", "fn",
                                           "recall", "precision", "accuracy", "f_score", "wall_ms"};
    REQUIRE(keys.size() >= leading.size());
    CHECK(std::vector<std::string>(keys.begin(), keys.begin() + 11) == leading);
    CHECK(j["rows"][0]["wall_ms"].is_null());
    CHECK(j["rows"][2]["process"] == "II");
    CHECK(j["rows"][2]["train_fraction"] == 0.75);
    CHECK(report_to_json(report, true)["rows"][0]["wall_ms"].is_number());
    CHECK(j["rows"][1]["accuracy"].get<double>() == report.rows[1].measures.accuracy);

    const std::string md = format_report(report, ReportFormat::Markdown);
    CHECK(md.find("| Algorithm | Tp | Fp | Tn | Fn | Recall | Precision | Accuracy | F-Score |") != std::string::npos);
    CHECK(md.find("seed") != std::string::npos);
    const auto csv = lines_of(format_report(report, ReportFormat::Csv));
    REQUIRE(csv.size() == 5);
    CHECK(csv[0] == "algorithm,process,tp,fp,tn,fn,recall,precision,accuracy,f_score,wall_ms,seed,error");
    CHECK(csv[1].rfind("LDA,I,", 0) == 0);

    CHECK(parse_report_format("md") == ReportFormat::Markdown);
    CHECK_FALSE(parse_report_format("xml").has_value());
    CHECK(lines_of(format_ranking(report)).size() == 2);
    CHECK(format_ranking(report).rfind("Process I: ", 0) == 0);
}

TEST_CASE("bench command") {
    SUBCASE("full run writes a reproducible report") {
        RunConfig c = synthetic_config();
        c.out = scratch("report_a.json");
        std::ostringstream out, err;
        CHECK(cmd_bench(c, out, err) == kExitOk);
        const std::string first = slurp(*c.out);
        CHECK(nlohmann::json::parse(first)["rows"].size() == 24);
        CHECK(lines_of(out.str()).size() == 3);
        c.out = scratch("report_b.json");
        std::ostringstream out2, err2;
        CHECK(cmd_bench(c, out2, err2) == kExitOk);
        CHECK(slurp(*c.out) == first);
    }
    SUBCASE("without --out the report goes to stdout and the ranking to stderr") {
        RunConfig c = synthetic_config();
        c.algorithms = {"lda", "nb"};
        c.processes = {"I"};
        std::ostringstream out, err;
        CHECK(cmd_bench(c, out, err) == kExitOk);
        CHECK(nlohmann::json::parse(out.str())["rows"].size() == 2);
        CHECK(err.str().rfind("Process I: ", 0) == 0);
    }
    SUBCASE("a failing cell gives exit 2 and still writes the report") {
        RunConfig c = synthetic_config();
        c.algorithms = {"knn"};
        c.k = 30;
        c.out = scratch("report_fail.json");
        std::ostringstream out, err;
        CHECK(cmd_bench(c, out, err) == kExitCellFailure);
        const auto j = nlohmann::json::parse(slurp(*c.out));
        CHECK(j["rows"].size() == 3);
        CHECK(j["rows"][1]["error"].is_string());
        CHECK(err.str().find("K-NN / II") != std::string::npos);
    }
    SUBCASE("fatal errors give exit 1") {
        std::ostringstream out, err;
        RunConfig none;
        CHECK(cmd_bench(none, out, err) == kExitFatal);
        RunConfig both = synthetic_config();
        both.data = scratch("x.csv");
        CHECK(cmd_bench(both, out, err) == kExitFatal);
        RunConfig missing;
        missing.data = scratch("does_not_exist.csv");
        CHECK(cmd_bench(missing, out, err) == kExitFatal);
        RunConfig bad_alg = synthetic_config();
        bad_alg.algorithms = {"qda"};
        CHECK(cmd_bench(bad_alg, out, err) == kExitFatal);
        RunConfig bad_format = synthetic_config();
        bad_format.format = "xml";
        CHECK(cmd_bench(bad_format, out, err) == kExitFatal);
        RunConfig unwritable = synthetic_config();
        unwritable.out = "/nonexistent_dir/report.json";
        CHECK(cmd_bench(unwritable, out, err) == kExitFatal);
        CHECK(err.str().find("error: ") != std::string::npos);
    }
    SUBCASE("markdown and csv formats") {
        RunConfig c = synthetic_config();
        c.processes = {"III"};
        c.format = "csv";
        std::ostringstream out, err;
        CHECK(cmd_bench(c, out, err) == kExitOk);
        CHECK(lines_of(out.str()).size() == 9);
        c.format = "markdown";
        std::ostringstream md, err2;
        CHECK(cmd_bench(c, md, err2) == kExitOk);
        CHECK(md.str().find("| LDA |") != std::string::npos);
    }
}

TEST_CASE("fit then predict matches in-process predictions") {
    const Dataset raw = oracle::blobs(50, 4, 2, 23, 1.0);
    const auto data = scratch("hundred.csv");
    save_csv(raw, data);
    const ScalingParams s = fit_scaling(raw);
    const Dataset z = s.apply(raw);
    for (AlgorithmId id : all_algorithms()) {
        INFO(algorithm_name(id));
        RunConfig c;
        c.data = data;
        c.label = raw.label_name();
        c.algorithm = algorithm_name(id);
        c.model = scratch("hundred_model.json");
        c.epochs = 200;
        std::ostringstream fit_out, fit_err;
        REQUIRE(cmd_fit(c, fit_out, fit_err) == kExitOk);

        std::ostringstream pred, pred_err;
        REQUIRE(cmd_predict(c, pred, pred_err) == kExitOk);
        const auto lines = lines_of(pred.str());
        REQUIRE(lines.size() == 101);
        CHECK(lines[0] == raw.label_name());
        const auto reference = fit_classifier(z, id, hyperparameters_from(c), c.seed);
        for (std::size_t i = 0; i < raw.n(); ++i) {
            CHECK(lines[i + 1] == raw.class_names()[static_cast<std::size_t>(reference.predict(z.row(i)))]);
        }
    }
}

TEST_CASE("k = 1 model reproduces the training labels") {
    const auto data = scratch("survey.csv");
    save_csv(generate_ecological({}), data);
    RunConfig c;
    c.data = data;
    c.algorithm = "knn";
    c.k = 1;
    c.model = scratch("knn1.json");
    std::ostringstream o, e;
    REQUIRE(cmd_fit(c, o, e) == kExitOk);
    CHECK(o.str().find("k: 1") != std::string::npos);
    std::ostringstream pred, e2;
    REQUIRE(cmd_predict(c, pred, e2) == kExitOk);
    const Dataset ds = load_csv(data, "sediment");
    const auto lines = lines_of(pred.str());
    REQUIRE(lines.size() == 31);
    for (std::size_t i = 0; i < ds.n(); ++i) CHECK(lines[i + 1] == ds.class_names()[static_cast<std::size_t>(ds.label(i))]);
}

TEST_CASE("fit and predict validation") {
    const auto data = scratch("survey_v.csv");
    save_csv(generate_ecological({}), data);
    RunConfig c;
    c.data = data;
    c.algorithm = "lda";
    c.model = scratch("lda.json");
    std::ostringstream o, e;
    REQUIRE(cmd_fit(c, o, e) == kExitOk);
    CHECK(o.str().find("Variable\tLD1\tLD2") != std::string::npos);

    SUBCASE("wrong column count names the expected p") {
        Dataset seven = generate_ecological({});
        Eigen::MatrixXd x = seven.features().leftCols(7);
        std::vector<std::string> names(seven.feature_names().begin(), seven.feature_names().begin() + 7);
        const auto narrow = scratch("narrow.csv");
        save_csv(Dataset(x, seven.labels(), names, seven.class_names(), "sediment"), narrow);
        RunConfig p = c;
        p.data = narrow;
        std::ostringstream out, err;
        CHECK(cmd_predict(p, out, err) == kExitFatal);
        CHECK(err.str().find("p = 8") != std::string::npos);
        CHECK(err.str().find("found 7") != std::string::npos);
    }
    SUBCASE("renamed columns fall back to position with a warning") {
        const auto renamed = scratch("renamed.csv");
        std::string text = slurp(data);
        text.replace(0, 1, "A");
        std::ofstream(renamed) << text;
        RunConfig p = c;
        p.data = renamed;
        std::ostringstream out, err, ref, ref_err;
        CHECK(cmd_predict(p, out, err) == kExitOk);
        CHECK(err.str().find("warning") != std::string::npos);
        CHECK(cmd_predict(c, ref, ref_err) == kExitOk);
        CHECK(out.str() == ref.str());
    }
    SUBCASE("usage errors") {
        std::ostringstream out, err;
        RunConfig no_alg = c;
        no_alg.algorithm.clear();
        CHECK(cmd_fit(no_alg, out, err) == kExitFatal);
        RunConfig no_model = c;
        no_model.model.reset();
        CHECK(cmd_fit(no_model, out, err) == kExitFatal);
        RunConfig trace = c;
        trace.trace = scratch("t.csv");
        CHECK(cmd_fit(trace, out, err) == kExitFatal);
        CHECK(err.str().find("--trace") != std::string::npos);
        RunConfig missing_model = c;
        missing_model.model = scratch("nope.json");
        CHECK(cmd_predict(missing_model, out, err) == kExitFatal);
    }
}

TEST_CASE("training traces") {
    const auto data = scratch("survey_t.csv");
    save_csv(generate_ecological({}), data);
    RunConfig c;
    c.data = data;
    c.model = scratch("traced.json");
    c.trace = scratch("trace.csv");

    c.algorithm = "ann";
    c.epochs = 50;
    std::ostringstream o, e;
    REQUIRE(cmd_fit(c, o, e) == kExitOk);
    CHECK(o.str().rfind("Error: ", 0) == 0);
    auto lines = lines_of(slurp(*c.trace));
    CHECK(lines[0] == "epoch,sse");
    CHECK(lines.size() >= 2);
    CHECK(lines.size() <= 51);

    c.algorithm = "rf";
    c.trees = 20;
    std::ostringstream o2, e2;
    REQUIRE(cmd_fit(c, o2, e2) == kExitOk);
    CHECK(o2.str().find("Mean Decrease Gini") != std::string::npos);
    lines = lines_of(slurp(*c.trace));
    CHECK(lines[0] == "trees,resubstitution_error,holdout_error");
    CHECK(lines.size() == 21);
}

TEST_CASE("gen-data and inspect") {
    RunConfig c;
    std::ostringstream out, err;
    REQUIRE(cmd_gen_data(c, out, err) == kExitOk);
    const auto lines = lines_of(out.str());
    CHECK(lines.size() == 31);
    for (const auto& line : lines) CHECK(cells(line).size() == 9);
    CHECK(lines[0] == "a,b,c,d,e,depth,pollution,temperature,sediment");

    RunConfig bad;
    bad.data = "x.csv";
    std::ostringstream o2, e2;
    CHECK(cmd_gen_data(bad, o2, e2) == kExitFatal);

    RunConfig inspect = synthetic_config();
    std::ostringstream text, e3;
    REQUIRE(cmd_inspect(inspect, text, e3) == kExitOk);
    const auto corr = block(text.str(), "correlation");
    REQUIRE(corr.size() == 9);
    for (std::size_t a = 1; a <= 8; ++a) {
        REQUIRE(corr[a].size() == 9);
        CHECK(std::stod(corr[a][a]) == 1.0);
        for (std::size_t b = 1; b <= 8; ++b) {
            CHECK(std::abs(std::stod(corr[a][b]) - std::stod(corr[b][a])) <= 1e-12);
            CHECK(std::abs(std::stod(corr[a][b])) <= 1.0);
        }
    }
    const auto classes = block(text.str(), "class,count");
    REQUIRE(classes.size() == 4);
    CHECK(classes[1][1] == "10");

    const auto zpath = scratch("standardized.csv");
    save_csv(standardize(generate_ecological({})).first, zpath);
    RunConfig zi;
    zi.data = zpath;
    std::ostringstream ztext, e4;
    REQUIRE(cmd_inspect(zi, ztext, e4) == kExitOk);
    const auto stats = block(ztext.str(), "feature,mean");
    REQUIRE(stats.size() == 9);
    for (std::size_t f = 1; f <= 8; ++f) {
        CHECK(std::abs(std::stod(stats[f][1])) <= 1e-9);
        CHECK(std::abs(std::stod(stats[f][2]) - 1.0) <= 1e-9);
    }
}

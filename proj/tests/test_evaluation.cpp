#include <algorithm>
#include <set>

#include "doctest.h"
#include "ecoml/evaluation.hpp"
#include "ecoml/report_io.hpp"
#include "oracles.hpp"

using namespace ecoml;

namespace {

const std::vector<Process>& three_processes() {
    static const std::vector<Process> p{Process::resubstitution(), Process::holdout(), Process::cross_validation()};
    return p;
}

ReportRow fake_row(AlgorithmId id, ProcessKind kind, double accuracy, double f_score, bool failed = false) {
    ReportRow r;
    r.algorithm = id;
    r.process.kind = kind;
    r.measures.accuracy = accuracy;
    r.measures.f_score = f_score;
    if (failed) r.error = "boom";
    return r;
}

bool same_numbers(const ReportRow& a, const ReportRow& b) {
    return a.ok() == b.ok() && a.seed == b.seed && a.aggregates.tp == b.aggregates.tp &&
           a.aggregates.fp == b.aggregates.fp && a.aggregates.tn == b.aggregates.tn &&
           a.aggregates.fn == b.aggregates.fn && a.measures.accuracy == b.measures.accuracy &&
           a.measures.f_score == b.measures.f_score;
}

}  // namespace

TEST_CASE("names and parsing") {
    CHECK(algorithm_name(AlgorithmId::KNN) == "K-NN");
    CHECK(parse_algorithm("knn") == AlgorithmId::KNN);
    CHECK(parse_algorithm("K-NN") == AlgorithmId::KNN);
    CHECK(parse_algorithm("lda") == AlgorithmId::LDA);
    CHECK_FALSE(parse_algorithm("qda").has_value());
    CHECK(all_algorithms().size() == 8);
    CHECK(process_name(ProcessKind::CrossValidation) == "III");
    CHECK(parse_process("2") == ProcessKind::Holdout);
    CHECK(parse_process("I") == ProcessKind::Resubstitution);
    CHECK_FALSE(parse_process("IV").has_value());
}

TEST_CASE("evaluation plans on 30 rows") {
    const Dataset ds = generate_ecological({});
    const auto resub = evaluation_plan(ds, Process::resubstitution(), 42);
    REQUIRE(resub.train.size() == 1);
    CHECK(resub.train[0].size() == 30);
    CHECK(resub.test[0] == resub.train[0]);

    const auto hold = evaluation_plan(ds, Process::holdout(), 42);
    REQUIRE(hold.train.size() == 1);
    CHECK(hold.train[0].size() == 22);
    CHECK(hold.test[0].size() == 8);

    const auto cv = evaluation_plan(ds, Process::cross_validation(), 42);
    REQUIRE(cv.test.size() == 3);
    std::multiset<std::size_t> sizes;
    std::set<Index> seen;
    for (std::size_t f = 0; f < 3; ++f) {
        sizes.insert(cv.test[f].size());
        seen.insert(cv.test[f].begin(), cv.test[f].end());
        CHECK(cv.train[f].size() + cv.test[f].size() == 30);
        for (auto i : cv.test[f]) CHECK(std::find(cv.train[f].begin(), cv.train[f].end(), i) == cv.train[f].end());
    }
    CHECK(sizes == std::multiset<std::size_t>{10, 10, 10});
    CHECK(seen.size() == 30);
}

TEST_CASE("pooled cross-validation scores every row once") {
    const Dataset ds = generate_ecological({});
    for (AlgorithmId id : all_algorithms()) {
        const auto row = run_process(ds, id, Process::cross_validation(), 42);
        REQUIRE(row.ok());
        REQUIRE(row.confusion.has_value());
        CHECK(row.confusion->total() == 30);
    }
    const auto five = run_process(ds, AlgorithmId::NB, Process::cross_validation(5), 42);
    CHECK(five.confusion->total() == 30);
}

TEST_CASE("every algorithm sees the same partitions") {
    const Dataset ds = generate_ecological({});
    for (const auto& process : three_processes()) {
        const auto a = evaluation_plan(ds, process, 7);
        const auto b = evaluation_plan(ds, process, 7);
        CHECK(a.test == b.test);
        CHECK(a.train == b.train);
    }
    // Model seeds differ between cells; partition seeds only between processes.
    CHECK(cell_seed(7, AlgorithmId::RF, ProcessKind::Holdout) != cell_seed(7, AlgorithmId::ANN, ProcessKind::Holdout));
    CHECK(partition_seed(7, ProcessKind::Holdout) != partition_seed(7, ProcessKind::CrossValidation));
}

TEST_CASE("holdout cell reproduces a hand-built pipeline") {
    const Dataset ds = generate_ecological({});
    const auto plan = evaluation_plan(ds, Process::holdout(), 42);
    const Dataset train = ds.subset(plan.train[0]);
    const Dataset test = ds.subset(plan.test[0]);
    const ScalingParams s = fit_scaling(train);
    const auto model = fit_knn(s.apply(train), kDefaultK);
    std::vector<int> predicted;
    for (std::size_t i = 0; i < test.n(); ++i) predicted.push_back(knn_predict(model, s.apply(test.row(i))));
    const auto expected = confusion_matrix(test.labels(), predicted, ds.c());

    const auto row = run_process(ds, AlgorithmId::KNN, Process::holdout(), 42);
    REQUIRE(row.ok());
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) CHECK(row.confusion->at(a, b) == expected.at(a, b));
    }
}

TEST_CASE("full benchmark") {
    const Dataset ds = generate_ecological({});
    const auto report = run_benchmark(ds, all_algorithms(), three_processes(), 42);
    REQUIRE(report.rows.size() == 24);
    CHECK(report.failures() == 0);
    CHECK(report.rows[0].process.kind == ProcessKind::Resubstitution);
    CHECK(report.rows[8].process.kind == ProcessKind::Holdout);
    CHECK(report.rows[23].algorithm == AlgorithmId::NB);
    for (const auto& row : report.rows) {
        const auto& g = row.aggregates;
        CHECK(row.measures.accuracy == doctest::Approx((g.tp + g.tn) / (g.tp + g.tn + g.fp + g.fn)));
        CHECK(std::abs(g.total() - 1.0) <= 1e-12);
        for (double v : {row.measures.recall, row.measures.precision, row.measures.accuracy, row.measures.f_score}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(report.find(AlgorithmId::LDA, ProcessKind::CrossValidation) != nullptr);

    SUBCASE("deterministic, also across thread counts") {
        const auto again = run_benchmark(ds, all_algorithms(), three_processes(), 42);
        const auto threaded = run_benchmark(ds, all_algorithms(), three_processes(), 42, {}, 4);
        const std::string text = format_report(report, ReportFormat::Json);
        CHECK(format_report(again, ReportFormat::Json) == text);
        CHECK(format_report(threaded, ReportFormat::Json) == text);
    }
    SUBCASE("cells do not depend on each other") {
        const auto part = run_benchmark(ds, {AlgorithmId::NB, AlgorithmId::RF}, {Process::cross_validation()}, 42);
        REQUIRE(part.rows.size() == 2);
        for (const auto& row : part.rows) CHECK(same_numbers(row, *report.find(row.algorithm, row.process.kind)));
        CHECK(same_numbers(run_process(ds, AlgorithmId::ANN, Process::holdout(), 42),
                           *report.find(AlgorithmId::ANN, ProcessKind::Holdout)));
    }
    SUBCASE("a different seed changes the partitions") {
        const auto other = run_benchmark(ds, all_algorithms(), three_processes(), 43);
        CHECK(format_report(other, ReportFormat::Json) != format_report(report, ReportFormat::Json));
    }
}

TEST_CASE("interpolating learners are perfect on their own training data") {
    const Dataset ds = generate_ecological({});
    Hyperparameters hp;
    hp.knn_k = 1;
    CHECK(run_process(ds, AlgorithmId::KNN, Process::resubstitution(), 42, hp).measures.accuracy == 1.0);
    CHECK(run_process(ds, AlgorithmId::DT, Process::resubstitution(), 42).measures.accuracy == 1.0);
}

TEST_CASE("failing cells are isolated") {
    const Dataset ds = generate_ecological({});
    Hyperparameters hp;
    hp.knn_k = 30;
    const auto report = run_benchmark(ds, {AlgorithmId::KNN, AlgorithmId::LDA}, three_processes(), 42, hp);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.find(AlgorithmId::KNN, ProcessKind::Resubstitution)->ok());
    const auto* hold = report.find(AlgorithmId::KNN, ProcessKind::Holdout);
    CHECK_FALSE(hold->ok());
    CHECK(hold->error.find("k = 30") != std::string::npos);
    CHECK_FALSE(report.find(AlgorithmId::KNN, ProcessKind::CrossValidation)->ok());
    CHECK(report.find(AlgorithmId::LDA, ProcessKind::Holdout)->ok());
    CHECK(report.failures() == 2);
    const auto ranking = rank_algorithms(report, ProcessKind::Holdout);
    CHECK(ranking.back() == AlgorithmId::KNN);

    CHECK_THROWS_AS(run_benchmark(ds, {}, three_processes(), 42), ModelError);
    CHECK_THROWS_AS(run_benchmark(ds, all_algorithms(), {}, 42), ModelError);
}

TEST_CASE("ranking") {
    BenchmarkReport r;
    r.rows = {fake_row(AlgorithmId::NB, ProcessKind::Resubstitution, 0.8, 0.8),
              fake_row(AlgorithmId::LDA, ProcessKind::Resubstitution, 0.9, 0.7),
              fake_row(AlgorithmId::SVM, ProcessKind::Resubstitution, 0.8, 0.95),
              fake_row(AlgorithmId::DT, ProcessKind::Resubstitution, 0.8, 0.8),
              fake_row(AlgorithmId::RF, ProcessKind::Resubstitution, 1.0, 1.0, true),
              fake_row(AlgorithmId::LR, ProcessKind::Holdout, 0.1, 0.1)};
    const auto order = rank_algorithms(r, ProcessKind::Resubstitution);
    CHECK(order == std::vector<AlgorithmId>{AlgorithmId::LDA, AlgorithmId::SVM, AlgorithmId::DT, AlgorithmId::NB,
                                            AlgorithmId::RF});
    CHECK(rank_algorithms(r, ProcessKind::Holdout) == std::vector<AlgorithmId>{AlgorithmId::LR});
    CHECK_THROWS_AS(rank_algorithms(r, ProcessKind::CrossValidation), ModelError);

    const Dataset ds = generate_ecological({});
    const auto real = run_benchmark(ds, all_algorithms(), {Process::cross_validation()}, 42);
    auto ranked = rank_algorithms(real, ProcessKind::CrossValidation);
    auto sorted_ranked = ranked;
    std::sort(sorted_ranked.begin(), sorted_ranked.end());
    auto all = all_algorithms();
    std::sort(all.begin(), all.end());
    CHECK(sorted_ranked == all);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        CHECK(real.find(ranked[i - 1], ProcessKind::CrossValidation)->measures.accuracy >=
              real.find(ranked[i], ProcessKind::CrossValidation)->measures.accuracy);
    }
}

TEST_CASE("well-separated survey is learned by every algorithm") {
    SyntheticSpec spec;
    spec.separation = 5.0;
    const Dataset ds = generate_ecological(spec);
    const auto report = run_benchmark(ds, all_algorithms(), {Process::resubstitution()}, 42);
    for (const auto& row : report.rows) {
        INFO(algorithm_name(row.algorithm));
        CHECK(row.ok());
        CHECK(row.measures.accuracy >= 0.90);
    }
}

TEST_CASE("fit_classifier dispatch") {
    const Dataset ds = standardize(oracle::blobs(10, 3, 3, 2, 5.0, 0.5)).first;
    for (AlgorithmId id : all_algorithms()) {
        const auto c = fit_classifier(ds, id, {}, 1);
        CHECK(c.id == id);
        const auto pred = c.predict_all(ds.features());
        REQUIRE(pred.size() == ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) CHECK(pred[i] == c.predict(ds.row(i)));
        CHECK(c.mlp_trace.has_value() == (id == AlgorithmId::ANN));
    }
}

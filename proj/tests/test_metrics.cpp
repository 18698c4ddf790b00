#include <array>
#include <random>

#include "doctest.h"
#include "ecoml/metrics.hpp"

using namespace ecoml;

namespace {

ConfusionMatrix from_rows(std::vector<std::vector<std::uint64_t>> rows) {
    ConfusionMatrix cm(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < rows.size(); ++b) cm.add(a, b, rows[a][b]);
    }
    return cm;
}

ConfusionMatrix random_cm(std::mt19937_64& rng, std::size_t c) {
    ConfusionMatrix cm(c);
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = 0; b < c; ++b) cm.add(a, b, rng() % 20);
    }
    cm.add(0, 0, 1);
    return cm;
}

}  // namespace

TEST_CASE("confusion_matrix counts") {
    const std::vector<int> a1{0, 1}, p1{0, 1};
    const auto perfect = confusion_matrix(a1, p1, 2);
    CHECK(perfect.at(0, 0) == 1);
    CHECK(perfect.at(1, 1) == 1);
    CHECK(perfect.at(0, 1) == 0);
    CHECK(perfect.at(1, 0) == 0);

    const std::vector<int> a2{0, 0, 1}, p2{1, 0, 1};
    const auto cm = confusion_matrix(a2, p2, 2);
    CHECK(cm.at(0, 1) == 1);
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(1, 1) == 1);
    CHECK(cm.at(1, 0) == 0);

    std::mt19937_64 rng(5);
    std::vector<int> a(200), p(200);
    std::array<std::array<std::uint64_t, 3>, 3> tally{};
    for (std::size_t i = 0; i < 200; ++i) {
        a[i] = static_cast<int>(rng() % 3);
        p[i] = static_cast<int>(rng() % 3);
        ++tally[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(p[i])];
    }
    const auto big = confusion_matrix(a, p, 3);
    CHECK(big.total() == 200);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(big.at(i, j) == tally[i][j]);
    }

    const std::vector<int> short_p{0};
    CHECK_THROWS_AS(confusion_matrix(a1, short_p, 2), MetricsError);
    const std::vector<int> bad{0, 2};
    CHECK_THROWS_AS(confusion_matrix(a1, bad, 2), MetricsError);
    const std::vector<int> empty;
    CHECK_THROWS_AS(confusion_matrix(empty, empty, 2), MetricsError);
}

TEST_CASE("one_vs_rest") {
    const auto cm = from_rows({{3, 1}, {2, 4}});
    const auto b = one_vs_rest(cm, 0);
    CHECK(b.tp == 3);
    CHECK(b.fn == 1);
    CHECK(b.fp == 2);
    CHECK(b.tn == 4);
    CHECK_THROWS_AS(one_vs_rest(cm, 2), MetricsError);

    const auto diag = from_rows({{4, 0, 0}, {0, 5, 0}, {0, 0, 6}});
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(one_vs_rest(diag, k).fp == 0);
        CHECK(one_vs_rest(diag, k).fn == 0);
    }

    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        const auto r = random_cm(rng, 2 + rng() % 4);
        for (std::size_t k = 0; k < r.classes(); ++k) {
            CHECK(one_vs_rest(r, k).total() == static_cast<double>(r.total()));
        }
    }
}

TEST_CASE("macro_aggregate") {
    const auto perfect = from_rows({{10, 0, 0}, {0, 10, 0}, {0, 0, 10}});
    const auto agg = macro_aggregate(perfect);
    CHECK(agg.tp == doctest::Approx(1.0 / 3.0));
    CHECK(agg.tn == doctest::Approx(2.0 / 3.0));
    CHECK(agg.fp == 0.0);
    CHECK(agg.fn == 0.0);

    const auto wrong = macro_aggregate(from_rows({{0, 5}, {5, 0}}));
    CHECK(wrong.tp == 0.0);
    CHECK(wrong.tn == 0.0);
    CHECK(wrong.fp == doctest::Approx(0.5));
    CHECK(wrong.fn == doctest::Approx(0.5));

    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        const auto r = random_cm(rng, 2 + rng() % 5);
        CHECK(std::abs(macro_aggregate(r).total() - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(macro_aggregate(ConfusionMatrix(3)), MetricsError);
}

TEST_CASE("recall, precision, accuracy and F-score") {
    const auto dt = measures({0.9151, 0.0848, 0.7615, 0.2384});
    CHECK(std::abs(dt.recall - 0.7932) <= 1e-3);
    CHECK(std::abs(dt.precision - 0.9152) <= 1e-3);
    CHECK(std::abs(dt.accuracy - 0.8384) <= 1e-3);
    CHECK(std::abs(dt.f_score - 0.8498) <= 1e-3);

    const auto lda = measures({0.9987, 0.0012, 0.9325, 0.0675});
    CHECK(std::abs(lda.recall - 0.9366) <= 1e-3);
    CHECK(std::abs(lda.accuracy - 0.9656) <= 1e-3);

    const auto perfect = measures({7, 0, 13, 0});
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.f_score == 1.0);

    const auto none = measures({0, 0, 5, 5});
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);
    CHECK(none.f_score == 0.0);
    CHECK(none.accuracy == 0.5);

    CHECK_THROWS_AS(measures({0, 0, 0, 0}), MetricsError);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const BinaryAggregates a{u(rng), u(rng), u(rng), u(rng)};
        const auto m = measures(a);
        for (double v : {m.recall, m.precision, m.accuracy, m.f_score}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.f_score >= std::min(m.precision, m.recall) - 1e-15);
        CHECK(m.f_score <= std::max(m.precision, m.recall) + 1e-15);
    }
}

TEST_CASE("two-class accuracy equals trace over total") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto cm = random_cm(rng, 2);
        CHECK(measures(macro_aggregate(cm)).accuracy == doctest::Approx(cm.accuracy()));
    }
}

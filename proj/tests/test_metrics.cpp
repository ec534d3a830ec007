#include "doctest.h"

#include "rebal/error.hpp"
#include "rebal/metrics.hpp"
#include "rebal/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace rebal;

namespace {

MetricsReport printed(std::string name, double precision, double recall, double f1, double accuracy) {
    MetricsReport r;
    r.model_name = std::move(name);
    r.precision = precision;
    r.recall = recall;
    r.f1 = f1;
    r.accuracy = accuracy;
    return r;
}

} // namespace

TEST_CASE("confusion matrix by hand") {
    const int t[] = {1, 0, 1, 1};
    const int p[] = {1, 0, 0, 1};
    CHECK(confusion_matrix(t, p) == ConfusionMatrix{2, 0, 1, 1});
    CHECK(confusion_matrix(t, t) == ConfusionMatrix{3, 0, 1, 0});

    const int neg[] = {0, 0, 0};
    const int pos[] = {1, 1, 1};
    CHECK(confusion_matrix(neg, pos) == ConfusionMatrix{0, 3, 0, 0});

    const int short_one[] = {1};
    CHECK_THROWS_AS(confusion_matrix(t, short_one), Error);
    CHECK_THROWS_AS(confusion_matrix(std::span<const int>{}, std::span<const int>{}), Error);
}

TEST_CASE("f1 from printed precision and recall") {
    CHECK(f1_score(0.539, 0.5634) == doctest::Approx(0.5509).epsilon(2e-4));
    CHECK(f1_score(0.468, 0.539) == doctest::Approx(0.5009).epsilon(2e-4));
    CHECK(f1_score(0.0, 0.0) == 0.0);
}

TEST_CASE("metrics edge cases") {
    const auto perfect = compute_metrics({5, 0, 5, 0}, "p");
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK_FALSE(perfect.degenerate);

    const auto none = compute_metrics({0, 0, 4, 2}, "n");
    CHECK(none.precision == 0.0);
    CHECK(none.f1 == 0.0);
    CHECK(none.degenerate);
}

TEST_CASE("metric identities on random matrices") {
    Rng gen(12);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + gen.uniform_index(60);
        std::vector<int> t(n);
        std::vector<int> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = gen.uniform01() < 0.3;
            p[i] = gen.uniform01() < 0.4;
        }
        const auto cm = confusion_matrix(t, p);
        CHECK(cm.total() == n);
        const auto swapped = confusion_matrix(p, t);
        CHECK(swapped.tp == cm.tp);
        CHECK(swapped.tn == cm.tn);
        CHECK(swapped.fp == cm.fn);
        CHECK(swapped.fn == cm.fp);

        const auto r = compute_metrics(cm, "x");
        CHECK(r.accuracy == static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n));
        for (double v : {r.precision, r.recall, r.f1, r.accuracy}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        if (r.precision > 0 && r.recall > 0) {
            CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-15);
            CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-15);
        }
    }
}

TEST_CASE("report table") {
    const std::vector<MetricsReport> rows{printed("SMOTE-LR", 0.539, 0.5634, 0.5509, 0.8626)};
    const auto table = format_report_table(rows);
    CHECK(table.find("MLA") == 0);
    std::istringstream lines(table);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.find_first_not_of('-') == std::string::npos);
    std::getline(lines, line);
    std::istringstream cells(line);
    std::vector<std::string> tokens;
    for (std::string t; cells >> t;) tokens.push_back(t);
    CHECK(tokens == std::vector<std::string>{"SMOTE-LR", "53.90%", "56.34%", "55.09%", "86.26%"});
    CHECK(line.rfind("SMOTE-LR  ", 0) == 0);

    const auto empty = format_report_table({});
    CHECK(std::count(empty.begin(), empty.end(), '\n') == 2);
    CHECK(empty.find("F1-score") != std::string::npos);

    CHECK(format_percent(1.0) == "100.00%");
    CHECK(format_percent(0.0) == "0.00%");
}

TEST_CASE("report json") {
    const auto r = compute_metrics({2, 0, 1, 1}, "LR");
    const auto j = to_json(r);
    CHECK(j.at("model") == "LR");
    CHECK(j.at("cm").at("tp") == 2);
    CHECK(j.at("recall").get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(to_json(std::span<const MetricsReport>{}).is_array());
}

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "rebal/dataset.hpp"
#include "rebal/metrics.hpp"
#include "rebal/models.hpp"
#include "rebal/neighbors.hpp"
#include "rebal/parallel.hpp"
#include "rebal/pipeline.hpp"
#include "rebal/random.hpp"
#include "rebal/resampling.hpp"
#include "rebal/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rebal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > budget_s) {
        out.pass = false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "; over time budget %.1fs", budget_s);
        out.detail += buf;
    }
    if (!out.pass) ++failures;
    std::printf("%s  %-28s %8.3fs  %s\n", out.pass ? "PASS" : "FAIL", name, elapsed, out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Matrix random_points(Rng& gen, std::size_t n, std::size_t d, double scale) {
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) m(i, j) = (gen.uniform01() * 2.0 - 1.0) * scale;
    }
    return m;
}

double euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

// 1 ---------------------------------------------------------------------------

Outcome f1_table() {
    struct Printed {
        const char* name;
        double precision, recall, f1;
    };
    const Printed rows[] = {
        {"RF", 35.4, 50.24, 41.53},       {"LR", 40.0, 54.9, 46.28},
        {"DT", 35.71, 32.05, 33.78},      {"XGBoost", 46.8, 53.9, 50.09},
        {"SMOTE-RF", 35.71, 51.62, 42.22}, {"SMOTE-LR", 53.9, 56.34, 55.09},
    };
    Outcome out;
    double worst = 0.0;
    for (const auto& r : rows) {
        const double f1 = 100.0 * f1_score(r.precision / 100.0, r.recall / 100.0);
        const double gap = std::abs(f1 - r.f1);
        worst = std::max(worst, gap);
        if (gap > 0.02) {
            out.pass = false;
            out.detail += fmt("%s: %.4f vs %.2f; ", r.name, f1, r.f1);
        }
    }
    out.detail += fmt("6 rows, max gap %.4f pp (tol 0.02)", worst);
    return out;
}

// 2 ---------------------------------------------------------------------------

Outcome split_sizes() {
    const auto d = generate_hr_dataset({8955, 0.156, 1, 0.0});
    const auto [train, test] = train_test_split(d, SplitSpec{0.2, 42, false});
    Outcome out;
    out.pass = d.row_count() == 8955 && train.row_count() == 7164 && test.row_count() == 1791;
    out.detail = fmt("8955 -> %zu train / %zu test", train.row_count(), test.row_count());
    return out;
}

// 3 ---------------------------------------------------------------------------

Outcome knn_oracle() {
    std::size_t queries = 0;
    std::size_t mismatches = 0;
    for (int variant = 0; variant < 2; ++variant) {
        Rng gen(2024 + variant);
        Matrix pts(200, 2);
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                // second set lives on a coarse grid, so exact ties are common
                pts(i, j) = variant == 0 ? gen.uniform01() * 100.0 : static_cast<double>(gen.uniform_index(12));
            }
        }
        const NeighborIndex index(pts);
        for (std::size_t q = 0; q < 200; ++q) {
            std::vector<std::pair<double, std::size_t>> table;
            for (std::size_t i = 0; i < 200; ++i) {
                if (i != q) table.emplace_back(euclid(pts.row(q), pts.row(i)), i);
            }
            std::sort(table.begin(), table.end());
            for (std::size_t k = 1; k <= 10; ++k) {
                ++queries;
                const auto got = nearest_neighbors(index, pts.row(q), k, q);
                bool same = got.size() == k;
                for (std::size_t i = 0; same && i < k; ++i) same = got[i] == table[i].second;
                mismatches += !same;
            }
        }
    }
    return {mismatches == 0, fmt("%zu queries (uniform + tied grid), k=1..10, %zu mismatches", queries, mismatches)};
}

// 4 ---------------------------------------------------------------------------

Outcome smote_contracts() {
    Rng gen(77);
    std::size_t generated = 0;
    std::size_t count_errors = 0;
    std::size_t outside = 0;
    std::size_t reconstruct_errors = 0;
    std::size_t ordered_pairs = 0;
    std::size_t ordered_disagree = 0;
    std::size_t unordered_pairs = 0;
    std::size_t unordered_agree = 0;

    for (int run = 0; run < 1000; ++run) {
        const std::size_t m = 2 + gen.uniform_index(24);
        const std::size_t d = 1 + gen.uniform_index(4);
        const auto minority = random_points(gen, m, d, 5.0);
        SmoteParams p;
        p.k = 1 + gen.uniform_index(std::min<std::size_t>(m - 1, 6));
        p.multiplier = gen.uniform_index(10);
        p.seed = gen.next_u64();
        const auto canonical = smote(minority, p);
        p.mode = SmoteMode::AbsoluteDistance;
        const auto literal = smote(minority, p);

        count_errors += canonical.samples.rows() != p.multiplier * m;
        count_errors += literal.samples.rows() != p.multiplier * m;
        generated += canonical.samples.rows();

        for (std::size_t s = 0; s < canonical.samples.rows(); ++s) {
            const auto& o = canonical.origins[s];
            const auto x = minority.row(o.point);
            const auto n = minority.row(o.neighbor);
            bool ordered = true;
            for (std::size_t j = 0; j < d; ++j) {
                const double v = canonical.samples(s, j);
                outside += v < std::min(x[j], n[j]) || v > std::max(x[j], n[j]);
                reconstruct_errors += v != x[j] + o.u * (n[j] - x[j]);
                ordered = ordered && x[j] <= n[j];
            }
            const auto a = canonical.samples.row(s);
            const auto b = literal.samples.row(s);
            const bool equal = std::equal(a.begin(), a.end(), b.begin());
            if (ordered) {
                ++ordered_pairs;
                ordered_disagree += !equal;
            } else if (o.u > 0.0) {
                ++unordered_pairs;
                unordered_agree += equal;
            }
        }
    }

    // documented witness: x=(1,0), neighbor (0,0), u=0.5
    const double x[] = {1, 0};
    const double n[] = {0, 0};
    double c[2];
    double l[2];
    smote_interpolate(x, n, 0.5, SmoteMode::Canonical, c);
    smote_interpolate(x, n, 0.5, SmoteMode::AbsoluteDistance, l);
    const bool witness = c[0] == 0.5 && c[1] == 0.0 && l[0] == 1.5 && l[1] == 0.0;

    Outcome out;
    out.pass = count_errors == 0 && outside == 0 && reconstruct_errors == 0 && ordered_disagree == 0 &&
               unordered_agree == 0 && witness && ordered_pairs > 0;
    out.detail = fmt("1000 runs, %zu points; count err %zu, outside %zu, modes: %zu/%zu ordered agree, "
                     "%zu/%zu unordered diverge, witness %s",
                     generated, count_errors, outside, ordered_pairs - ordered_disagree, ordered_pairs,
                     unordered_pairs - unordered_agree, unordered_pairs, witness ? "ok" : "bad");
    return out;
}

// 5 ---------------------------------------------------------------------------

Outcome nearmiss_oracle() {
    Rng gen(505);
    std::size_t mismatches = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n_min = 3 + gen.uniform_index(30);
        const std::size_t n_maj = n_min + gen.uniform_index(200 - 2 * n_min);
        const std::size_t d = 1 + gen.uniform_index(4);
        ClassPartition part;
        part.majority = random_points(gen, n_maj, d, 3.0);
        part.minority = random_points(gen, n_min, d, 3.0);
        const std::size_t k = 1 + gen.uniform_index(n_min);
        const std::size_t target = 1 + gen.uniform_index(n_maj);

        std::vector<std::pair<double, std::size_t>> scored;
        for (std::size_t i = 0; i < n_maj; ++i) {
            std::vector<double> dist;
            for (std::size_t j = 0; j < n_min; ++j) dist.push_back(euclid(part.majority.row(i), part.minority.row(j)));
            std::sort(dist.begin(), dist.end());
            double sum = 0.0;
            for (std::size_t t = 0; t < k; ++t) sum += dist[t];
            scored.emplace_back(sum / static_cast<double>(k), i);
        }
        std::sort(scored.begin(), scored.end());
        std::vector<std::size_t> expected;
        for (std::size_t t = 0; t < target; ++t) expected.push_back(scored[t].second);

        mismatches += nearmiss(part, 1, k, target) != expected;
    }
    return {mismatches == 0, fmt("50 instances (<=200 points), %zu mismatches", mismatches)};
}

// 6 ---------------------------------------------------------------------------

Outcome gradient_check() {
    Rng gen(606);
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = 5 + gen.uniform_index(40);
        const std::size_t d = 1 + gen.uniform_index(6);
        const auto x = random_points(gen, n, d, 2.0);
        std::vector<int> y(n);
        for (auto& v : y) v = gen.uniform01() < 0.4 ? 1 : 0;
        std::vector<double> w(d);
        for (auto& v : w) v = gen.normal();
        const double b = gen.normal();
        const double l2 = gen.uniform01() * 0.5;

        const auto obj = logistic_objective(x, y, w, b, l2);
        const double h = 1e-5;
        double diff2 = 0.0;
        double analytic2 = 0.0;
        double numeric2 = 0.0;
        for (std::size_t j = 0; j <= d; ++j) {
            auto wp = w;
            auto wm = w;
            double bp = b;
            double bm = b;
            if (j < d) {
                wp[j] += h;
                wm[j] -= h;
            } else {
                bp += h;
                bm -= h;
            }
            const double numeric =
                (logistic_objective(x, y, wp, bp, l2).loss - logistic_objective(x, y, wm, bm, l2).loss) / (2 * h);
            const double analytic = j < d ? obj.grad_weights[j] : obj.grad_bias;
            diff2 += (analytic - numeric) * (analytic - numeric);
            analytic2 += analytic * analytic;
            numeric2 += numeric * numeric;
        }
        const double rel = std::sqrt(diff2) / std::max({std::sqrt(analytic2), std::sqrt(numeric2), 1e-12});
        worst = std::max(worst, rel);
    }
    return {worst < 1e-6, fmt("20 instances, max relative error %.3e (tol 1e-6)", worst)};
}

// 7 ---------------------------------------------------------------------------

Outcome tree_consistency() {
    Rng gen(707);
    std::size_t imperfect = 0;
    std::size_t bad_gini = 0;
    std::size_t nodes = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = 50 + gen.uniform_index(400);
        const std::size_t d = 1 + gen.uniform_index(5);
        FeatureMatrix x;
        for (std::size_t j = 0; j < d; ++j) x.column_names.push_back("f" + std::to_string(j));
        x.values = Matrix(0, d);
        std::vector<int> y;
        std::set<std::vector<double>> seen;
        while (y.size() < n) {
            std::vector<double> row(d);
            for (auto& v : row) v = std::round(gen.uniform01() * 1000.0) / 10.0;
            if (!seen.insert(row).second) continue;
            x.values.append_row(row);
            y.push_back(gen.uniform01() < 0.3 ? 1 : 0);
        }
        auto cfg = ModelConfig::defaults_for(ModelFamily::DecisionTree);
        cfg.max_depth.reset();
        cfg.min_samples_leaf = 1;
        const auto tree = fit_tree(x, y, cfg);
        const auto pred = classify(Model(tree, d).predict_proba(x.values), 0.5);
        imperfect += pred != y;
        for (const auto& node : tree.nodes) {
            ++nodes;
            bad_gini += !(node.impurity >= 0.0 && node.impurity <= 0.5);
        }
    }
    return {imperfect == 0 && bad_gini == 0,
            fmt("20 datasets, %zu below accuracy 1.0; %zu nodes, %zu Gini outside [0,0.5]", imperfect, nodes,
                bad_gini)};
}

// 8, 9 ------------------------------------------------------------------------

nlohmann::json schema_json() {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : hr_schema()) arr.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
    return arr;
}

Outcome smote_direction() {
    const auto raw = generate_hr_dataset({5000, 0.156, 2021, 0.0});
    const nlohmann::json doc{{"dataset", "in-memory"},
                             {"schema", schema_json()},
                             {"target", "target"},
                             {"split", {{"test_fraction", 0.2}, {"seed", 42}}},
                             {"models",
                              {{{"family", "lr"}, {"name", "LR"}},
                               {{"family", "lr"},
                                {"name", "SMOTE-LR"},
                                {"resampler", {{"strategy", "smote"}, {"k", 5}, {"seed", 7}}}}}}};
    const auto result = run_experiment(parse_config(doc.dump()), raw);
    const double plain = result.reports[0].recall;
    const double smote = result.reports[1].recall;
    return {smote >= plain, fmt("recall LR %.2f%% -> SMOTE-LR %.2f%% (precision %.2f%% -> %.2f%%)", 100 * plain,
                                100 * smote, 100 * result.reports[0].precision, 100 * result.reports[1].precision)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path dir = fs::path(REBAL_TEST_TMP) / "acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    save_csv(dir / "hr.csv", generate_hr_dataset({5000, 0.156, 99, 0.02}));
    const nlohmann::json doc{
        {"dataset", (dir / "hr.csv").string()},
        {"schema", schema_json()},
        {"target", "target"},
        {"split", {{"test_fraction", 0.2}, {"seed", 42}}},
        {"encoders", {{{"column", "company_type"}, {"method", "impact"}}, {{"column", "experience"}, {"min_count", 50}}}},
        {"models",
         {{{"family", "lr"}},
          {{"family", "lr"}, {"name", "SMOTE-LR"}, {"resampler", {{"strategy", "smote"}, {"seed", 5}}}},
          {{"family", "dt"}},
          {{"family", "rf"}, {"n_trees", 30}, {"seed", 3}},
          {{"family", "rf"}, {"name", "SMOTE-RF"}, {"n_trees", 30}, {"seed", 3}, {"resampler", {{"strategy", "smote"}, {"seed", 5}}}},
          {{"family", "xgb"}, {"rounds", 40}},
          {{"family", "lr"}, {"name", "NM1-LR"}, {"resampler", {{"strategy", "nearmiss1"}, {"k", 3}}}}}}};
    const auto cfg = parse_config(doc.dump());
    const std::vector<ReportFormat> json{ReportFormat::Json};

    auto timed_run = [&](unsigned threads, const char* sub) {
        const auto t0 = Clock::now();
        emit_report(run_experiment(cfg, RunOptions{threads}), json, dir / sub);
        return seconds_since(t0);
    };
    const unsigned many = std::max(4u, resolve_threads(0));
    const double first = timed_run(1, "a");
    const double second = timed_run(1, "b");
    const double threaded = timed_run(many, "c");

    const auto a = slurp(dir / "a" / "report.json");
    const bool repeat_same = !a.empty() && a == slurp(dir / "b" / "report.json");
    const bool thread_same = a == slurp(dir / "c" / "report.json");
    const bool timing = second <= 2.0 * first && threaded <= 2.0 * first;
    return {repeat_same && thread_same && timing,
            fmt("7 models; repeat %s, 1 vs %u threads %s; runs %.2fs / %.2fs / %.2fs", repeat_same ? "identical" : "DIFFER",
                many, thread_same ? "identical" : "DIFFER", first, second, threaded)};
}

} // namespace

int main() {
    std::printf("acceptance criteria\n");
    criterion("f1-identity-table", 1.0, f1_table);
    criterion("split-8955", 1.0, split_sizes);
    criterion("knn-oracle", 1.0, knn_oracle);
    criterion("smote-contracts", 5.0, smote_contracts);
    criterion("nearmiss1-oracle", 5.0, nearmiss_oracle);
    criterion("logistic-gradient", 1.0, gradient_check);
    criterion("tree-consistency", 5.0, tree_consistency);
    criterion("smote-recall-direction", 60.0, smote_direction);
    criterion("report-determinism", 600.0, determinism);
    std::printf("%d failed\n", failures);
    return failures == 0 ? 0 : 1;
}

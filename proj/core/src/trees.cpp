#include "rebal/error.hpp"
#include "rebal/models.hpp"
#include "rebal/parallel.hpp"
#include "rebal/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace rebal {

double Tree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

std::size_t Tree::depth() const {
    if (nodes.empty()) {
        return 0;
    }
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    // children always follow their parent in the node array
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& n) { return n.is_leaf(); }));
}

double BoostedModel::raw_score(std::span<const double> x) const {
    double total = 0.0;
    for (const auto& t : trees) total += t.predict(x);
    return base_score + learning_rate * total;
}

namespace {

// Split criteria ----------------------------------------------------------
//
// A criterion scores child statistics; the grower maximizes `quality`.
// Samples are positions in a training sample (bootstrap draws may repeat
// a matrix row), each carrying per-sample statistics.

struct GiniCriterion {
    struct Stats {
        double n = 0.0;
        double pos = 0.0;
        void add(const Stats& o) { n += o.n; pos += o.pos; }
        void sub(const Stats& o) { n -= o.n; pos -= o.pos; }
    };

    std::span<const Stats> per_sample;

    static double gini(const Stats& s) {
        if (s.n <= 0.0) return 0.0;
        const double p = s.pos / s.n;
        return 2.0 * p * (1.0 - p);
    }
    // negative weighted child impurity (the parent's share is constant)
    double quality(const Stats& l, const Stats& r, const Stats& /*parent*/) const {
        return -(l.n * gini(l) + r.n * gini(r));
    }
    bool accept(double /*quality*/) const { return true; }
    bool splittable(const Stats& s) const { return s.pos > 0.0 && s.pos < s.n; }
    double leaf_value(const Stats& s) const { return s.n > 0.0 ? s.pos / s.n : 0.0; }
    double impurity(const Stats& s) const { return gini(s); }
};

struct GradientCriterion {
    struct Stats {
        double g = 0.0;
        double h = 0.0;
        void add(const Stats& o) { g += o.g; h += o.h; }
        void sub(const Stats& o) { g -= o.g; h -= o.h; }
    };

    std::span<const Stats> per_sample;
    double lambda = 1.0;

    double term(const Stats& s) const {
        const double denom = s.h + lambda;
        return denom > 0.0 ? s.g * s.g / denom : 0.0;
    }
    double quality(const Stats& l, const Stats& r, const Stats& parent) const {
        return 0.5 * (term(l) + term(r) - term(parent));
    }
    bool accept(double quality) const { return quality > 0.0; }
    bool splittable(const Stats&) const { return true; }
    double leaf_value(const Stats& s) const {
        const double denom = s.h + lambda;
        return denom > 0.0 ? -s.g / denom : 0.0;
    }
    double impurity(const Stats&) const { return 0.0; }
};

struct GrowOptions {
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_leaf = 1;
    std::optional<std::size_t> features_per_split; ///< unset: all
    unsigned threads = 1;
};

/// Per-feature sample orderings for one node, ascending by (value, sample).
using Orderings = std::vector<std::vector<std::uint32_t>>;

struct Split {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double quality = 0.0;
};

template <typename Criterion>
class Grower {
public:
    using Stats = typename Criterion::Stats;

    Grower(const Matrix& x, std::span<const std::size_t> sample_rows, Criterion criterion, GrowOptions opts,
           Rng* rng)
        : x_(x), rows_(sample_rows), crit_(criterion), opts_(opts), rng_(rng), side_(sample_rows.size(), 0) {}

    Tree grow(Orderings root) {
        Tree tree;
        tree.nodes.reserve(64);
        build(tree, std::move(root), 0);
        return tree;
    }

private:
    double value(std::uint32_t sample, std::size_t feature) const { return x_(rows_[sample], feature); }

    Split best_for_feature(const std::vector<std::uint32_t>& order, std::size_t feature, const Stats& total) const {
        Split best;
        const std::size_t n = order.size();
        const std::size_t min_leaf = std::max<std::size_t>(opts_.min_samples_leaf, 1);
        Stats left;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left.add(crit_.per_sample[order[i]]);
            const double a = value(order[i], feature);
            const double b = value(order[i + 1], feature);
            const std::size_t n_left = i + 1;
            if (!(a < b) || n_left < min_leaf || n - n_left < min_leaf) {
                continue;
            }
            Stats right = total;
            right.sub(left);
            const double q = crit_.quality(left, right, total);
            if (!best.valid || q > best.quality) {
                double t = a + (b - a) * 0.5;
                if (!(t < b)) t = a;
                best = {true, feature, t, q};
            }
        }
        return best;
    }

    std::vector<std::size_t> candidate_features() {
        const std::size_t d = x_.cols();
        std::vector<std::size_t> all(d);
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (!opts_.features_per_split || *opts_.features_per_split >= d || rng_ == nullptr) {
            return all;
        }
        const std::size_t m = *opts_.features_per_split;
        for (std::size_t t = 0; t < m; ++t) {
            const std::size_t j = t + rng_->uniform_index(d - t);
            std::swap(all[t], all[j]);
        }
        all.resize(m);
        std::sort(all.begin(), all.end());
        return all;
    }

    std::size_t build(Tree& tree, Orderings orders, std::size_t depth) {
        const auto& any = orders.front();
        Stats total;
        for (std::uint32_t s : any) total.add(crit_.per_sample[s]);

        const std::size_t id = tree.nodes.size();
        TreeNode node;
        node.samples = any.size();
        node.value = crit_.leaf_value(total);
        node.impurity = crit_.impurity(total);
        tree.nodes.push_back(node);

        const bool depth_left = !opts_.max_depth || depth < *opts_.max_depth;
        if (!depth_left || !crit_.splittable(total) || any.size() < 2 * std::max<std::size_t>(opts_.min_samples_leaf, 1)) {
            return id;
        }

        const auto features = candidate_features();
        std::vector<Split> per_feature(features.size());
        const unsigned threads = any.size() >= 2048 ? opts_.threads : 1;
        parallel_for(features.size(), threads, [&](std::size_t t) {
            per_feature[t] = best_for_feature(orders[features[t]], features[t], total);
        });
        Split best;
        for (const auto& s : per_feature) {
            if (s.valid && (!best.valid || s.quality > best.quality)) best = s;
        }
        if (!best.valid || !crit_.accept(best.quality)) {
            return id;
        }

        for (std::uint32_t s : any) {
            side_[s] = value(s, best.feature) <= best.threshold ? 1 : 2;
        }
        Orderings left(orders.size());
        Orderings right(orders.size());
        for (std::size_t f = 0; f < orders.size(); ++f) {
            for (std::uint32_t s : orders[f]) {
                (side_[s] == 1 ? left[f] : right[f]).push_back(s);
            }
            std::vector<std::uint32_t>().swap(orders[f]);
        }

        tree.nodes[id].feature = static_cast<std::int32_t>(best.feature);
        tree.nodes[id].threshold = best.threshold;
        const std::size_t l = build(tree, std::move(left), depth + 1);
        tree.nodes[id].left = static_cast<std::int32_t>(l);
        const std::size_t r = build(tree, std::move(right), depth + 1);
        tree.nodes[id].right = static_cast<std::int32_t>(r);
        return id;
    }

    const Matrix& x_;
    std::span<const std::size_t> rows_;
    Criterion crit_;
    GrowOptions opts_;
    Rng* rng_;
    std::vector<std::uint8_t> side_;
};

Orderings sorted_orderings(const Matrix& x, std::span<const std::size_t> sample_rows) {
    const std::size_t n = sample_rows.size();
    Orderings out(x.cols());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        auto& order = out[f];
        order.resize(n);
        std::iota(order.begin(), order.end(), std::uint32_t{0});
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double va = x(sample_rows[a], f);
            const double vb = x(sample_rows[b], f);
            return va < vb || (va == vb && a < b);
        });
    }
    return out;
}

void check_inputs(const FeatureMatrix& x, std::span<const int> y, const char* what) {
    if (x.n_rows() == 0) {
        throw Error(ErrorCode::EmptyInput, std::string(what) + " needs at least one row");
    }
    if (y.size() != x.n_rows()) {
        throw Error(ErrorCode::LengthMismatch, "one label per row required");
    }
    for (double v : x.values.data()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " requires finite features");
        }
    }
}

Tree grow_gini(const Matrix& x, std::span<const int> y, std::span<const std::size_t> sample_rows,
               const GrowOptions& opts, Rng* rng) {
    std::vector<GiniCriterion::Stats> stats(sample_rows.size());
    for (std::size_t s = 0; s < sample_rows.size(); ++s) {
        stats[s] = {1.0, y[sample_rows[s]] == 1 ? 1.0 : 0.0};
    }
    if (x.cols() == 0) {
        // featureless input: a single leaf
        Tree t;
        GiniCriterion c{stats};
        GiniCriterion::Stats total;
        for (const auto& s : stats) total.add(s);
        TreeNode leaf;
        leaf.samples = sample_rows.size();
        leaf.value = c.leaf_value(total);
        leaf.impurity = c.impurity(total);
        t.nodes.push_back(leaf);
        return t;
    }
    Grower<GiniCriterion> grower(x, sample_rows, GiniCriterion{stats}, opts, rng);
    return grower.grow(sorted_orderings(x, sample_rows));
}

} // namespace

Tree fit_tree(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg) {
    check_inputs(x, y, "decision tree");
    std::vector<std::size_t> rows(x.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    GrowOptions opts;
    opts.max_depth = cfg.max_depth;
    opts.min_samples_leaf = cfg.min_samples_leaf;
    opts.threads = cfg.threads;
    return grow_gini(x.values, y, rows, opts, nullptr);
}

ForestModel fit_forest(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg) {
    check_inputs(x, y, "random forest");
    if (cfg.n_trees == 0) {
        throw Error(ErrorCode::InvalidArgument, "a forest needs at least one tree");
    }
    const std::size_t d = x.n_cols();
    ForestModel forest;
    forest.bootstrap = cfg.bootstrap;
    forest.seed = cfg.seed;
    forest.max_features = cfg.max_features
                              ? std::min(*cfg.max_features, d)
                              : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    forest.max_features = std::max<std::size_t>(forest.max_features, d == 0 ? 0 : 1);
    forest.trees.resize(cfg.n_trees);

    const std::size_t n = x.n_rows();
    parallel_for(cfg.n_trees, cfg.threads, [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        std::vector<std::size_t> rows(n);
        if (cfg.bootstrap) {
            for (auto& r : rows) r = rng.uniform_index(n);
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        GrowOptions opts;
        opts.max_depth = cfg.max_depth;
        opts.min_samples_leaf = cfg.min_samples_leaf;
        opts.features_per_split = forest.max_features;
        opts.threads = 1;
        forest.trees[t] = grow_gini(x.values, y, rows, opts, &rng);
    });
    return forest;
}

BoostedModel fit_gbt(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg) {
    check_inputs(x, y, "gradient boosting");
    if (!(cfg.learning_rate >= 0.0) || !(cfg.l2 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "learning rate and l2 must be nonnegative");
    }
    const std::size_t n = x.n_rows();
    constexpr double eps = 1e-6;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    const double p0 = std::clamp(mean, eps, 1.0 - eps);

    BoostedModel model;
    model.base_score = std::log(p0 / (1.0 - p0));
    model.learning_rate = cfg.learning_rate;
    model.l2_lambda = cfg.l2;
    model.rounds = cfg.rounds;
    model.trees.reserve(cfg.rounds);

    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const Orderings presorted = x.n_cols() > 0 ? sorted_orderings(x.values, rows) : Orderings{};

    std::vector<double> raw(n, model.base_score);
    std::vector<GradientCriterion::Stats> stats(n);
    GrowOptions opts;
    opts.max_depth = cfg.max_depth;
    opts.min_samples_leaf = cfg.min_samples_leaf;
    opts.threads = cfg.threads;

    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(raw[i]);
            stats[i] = {p - (y[i] == 1 ? 1.0 : 0.0), p * (1.0 - p)};
        }
        Tree tree;
        const GradientCriterion crit{stats, cfg.l2};
        if (x.n_cols() == 0) {
            GradientCriterion::Stats total;
            for (const auto& s : stats) total.add(s);
            TreeNode leaf;
            leaf.samples = n;
            leaf.value = crit.leaf_value(total);
            tree.nodes.push_back(leaf);
        } else {
            Grower<GradientCriterion> grower(x.values, rows, crit, opts, nullptr);
            tree = grower.grow(presorted);
        }
        for (const auto& node : tree.nodes) {
            if (!std::isfinite(node.value)) {
                throw Error(ErrorCode::NonFiniteScore, "non-finite leaf value in round " + std::to_string(round));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            raw[i] += cfg.learning_rate * tree.predict(x.values.row(i));
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

double mean_log_loss(std::span<const double> probabilities, std::span<const int> y) {
    constexpr double eps = 1e-15;
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double p = std::clamp(probabilities[i], eps, 1.0 - eps);
        total -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return y.empty() ? 0.0 : total / static_cast<double>(y.size());
}

} // namespace rebal

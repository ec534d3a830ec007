#include "rebal/resampling.hpp"

#include "rebal/dataset.hpp"
#include "rebal/error.hpp"
#include "rebal/neighbors.hpp"
#include "rebal/parallel.hpp"
#include "rebal/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace rebal {

std::string_view to_string(ResampleStrategy s) noexcept {
    switch (s) {
        case ResampleStrategy::None: return "none";
        case ResampleStrategy::Smote: return "smote";
        case ResampleStrategy::NearMiss1: return "nearmiss1";
        case ResampleStrategy::NearMiss2: return "nearmiss2";
        case ResampleStrategy::NearMiss3: return "nearmiss3";
        case ResampleStrategy::RandomOver: return "random_over";
        case ResampleStrategy::RandomUnder: return "random_under";
    }
    return "unknown";
}

std::optional<ResampleStrategy> parse_resample_strategy(std::string_view text) noexcept {
    for (auto s : {ResampleStrategy::None, ResampleStrategy::Smote, ResampleStrategy::NearMiss1,
                   ResampleStrategy::NearMiss2, ResampleStrategy::NearMiss3, ResampleStrategy::RandomOver,
                   ResampleStrategy::RandomUnder}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

std::string_view resample_strategy_names() noexcept {
    return "none, smote, nearmiss1, nearmiss2, nearmiss3, random_over, random_under";
}

std::string_view to_string(SmoteMode m) noexcept {
    return m == SmoteMode::Canonical ? "canonical" : "paper_literal";
}

std::optional<SmoteMode> parse_smote_mode(std::string_view text) noexcept {
    if (text == "canonical") return SmoteMode::Canonical;
    if (text == "paper_literal") return SmoteMode::AbsoluteDistance;
    return std::nullopt;
}

ClassPartition partition_classes(const FeatureMatrix& features, std::span<const int> labels) {
    if (labels.size() != features.n_rows()) {
        throw Error(ErrorCode::LengthMismatch, "one label per feature row required");
    }
    const auto counts = class_counts(labels);
    ClassPartition p;
    p.minority_label = counts[1] <= counts[0] ? 1 : 0;
    p.majority_label = 1 - p.minority_label;
    p.feature_names = features.column_names;
    p.majority = Matrix(0, features.n_cols());
    p.minority = Matrix(0, features.n_cols());
    for (std::size_t r = 0; r < labels.size(); ++r) {
        const int y = labels[r] == 1 ? 1 : 0;
        if (y == p.minority_label) {
            p.minority.append_row(features.values.row(r));
            p.minority_rows.push_back(r);
        } else {
            p.majority.append_row(features.values.row(r));
            p.majority_rows.push_back(r);
        }
    }
    return p;
}

// SMOTE -------------------------------------------------------------------

void smote_interpolate(std::span<const double> point, std::span<const double> neighbor, double u,
                       SmoteMode mode, std::span<double> out) {
    for (std::size_t j = 0; j < point.size(); ++j) {
        if (mode == SmoteMode::Canonical) {
            out[j] = point[j] + u * (neighbor[j] - point[j]);
        } else {
            out[j] = point[j] + u * std::abs(point[j] - neighbor[j]);
        }
    }
}

SmoteResult smote(const Matrix& minority, const SmoteParams& params) {
    const std::size_t m = minority.rows();
    SmoteResult result;
    result.samples = Matrix(0, minority.cols());
    if (params.multiplier == 0) {
        return result;
    }
    if (m < 2) {
        throw Error(ErrorCode::TooFewMinoritySamples, "SMOTE needs at least 2 minority points, got " +
                                                          std::to_string(m));
    }
    if (params.k == 0 || params.k > m - 1) {
        throw Error(ErrorCode::KTooLarge, "SMOTE k=" + std::to_string(params.k) + " must lie in [1, " +
                                              std::to_string(m - 1) + "]");
    }
    if (params.fixed_u && !(*params.fixed_u >= 0.0 && *params.fixed_u <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "fixed interpolation factor must lie in [0, 1]");
    }

    const NeighborIndex index(minority);
    std::vector<std::vector<std::size_t>> neighbors(m);
    parallel_for(m, params.threads, [&](std::size_t i) { neighbors[i] = index.nearest_to_member(i, params.k); });

    // All random draws happen here, sequentially, so threads never affect output.
    Rng rng(params.seed);
    const std::size_t n = params.multiplier;
    result.origins.reserve(m * n);
    std::vector<double> sample(minority.cols());
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> picks;
        picks.reserve(n);
        if (n <= params.k) {
            std::vector<std::size_t> pool = neighbors[i];
            for (std::size_t t = 0; t < n; ++t) {
                const std::size_t j = t + rng.uniform_index(pool.size() - t);
                std::swap(pool[t], pool[j]);
                picks.push_back(pool[t]);
            }
        } else {
            for (std::size_t t = 0; t < n; ++t) {
                picks.push_back(neighbors[i][rng.uniform_index(params.k)]);
            }
        }
        for (std::size_t nb : picks) {
            const double u = params.fixed_u ? *params.fixed_u : rng.uniform01();
            smote_interpolate(minority.row(i), minority.row(nb), u, params.mode, sample);
            result.samples.append_row(sample);
            result.origins.push_back({i, nb, u});
        }
    }
    return result;
}

// NearMiss ----------------------------------------------------------------

std::vector<double> nearmiss_scores(const ClassPartition& partition, int variant, std::size_t k,
                                    unsigned threads) {
    if (variant != 1 && variant != 2) {
        throw Error(ErrorCode::InvalidArgument, "scores exist only for NearMiss-1 and NearMiss-2");
    }
    const std::size_t n_min = partition.minority.rows();
    if (n_min == 0) {
        throw Error(ErrorCode::EmptyMinority, "NearMiss needs at least one minority point");
    }
    if (k == 0 || k > n_min) {
        throw Error(ErrorCode::KTooLarge, "NearMiss k=" + std::to_string(k) + " must lie in [1, " +
                                              std::to_string(n_min) + "]");
    }
    const std::size_t n_maj = partition.majority.rows();
    std::vector<double> scores(n_maj);
    parallel_for(n_maj, threads, [&](std::size_t i) {
        std::vector<double> dist(n_min);
        for (std::size_t j = 0; j < n_min; ++j) {
            dist[j] = std::sqrt(squared_distance(partition.majority.row(i), partition.minority.row(j)));
        }
        const auto kk = static_cast<std::ptrdiff_t>(k);
        double sum = 0.0;
        if (variant == 1) {
            std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
            for (std::size_t t = 0; t < k; ++t) sum += dist[t];
        } else {
            std::partial_sort(dist.begin(), dist.begin() + kk, dist.end(), std::greater<>());
            for (std::size_t t = 0; t < k; ++t) sum += dist[t];
        }
        scores[i] = sum / static_cast<double>(k);
    });
    return scores;
}

std::vector<std::size_t> nearmiss(const ClassPartition& partition, int variant, std::size_t k,
                                  std::size_t target, unsigned threads) {
    const std::size_t n_maj = partition.majority.rows();
    if (variant == 3) {
        if (partition.minority.rows() == 0) {
            throw Error(ErrorCode::EmptyMinority, "NearMiss-3 needs at least one minority point");
        }
        if (k == 0 || k > n_maj) {
            throw Error(ErrorCode::KTooLarge, "NearMiss-3 k=" + std::to_string(k) + " must lie in [1, " +
                                                  std::to_string(n_maj) + "]");
        }
        const NeighborIndex index(partition.majority);
        std::vector<std::vector<std::size_t>> found(partition.minority.rows());
        parallel_for(found.size(), threads,
                     [&](std::size_t i) { found[i] = index.nearest(partition.minority.row(i), k); });
        std::vector<char> keep(n_maj, 0);
        for (const auto& f : found) {
            for (std::size_t i : f) keep[i] = 1;
        }
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_maj; ++i) {
            if (keep[i]) out.push_back(i);
        }
        return out;
    }
    if (variant != 1 && variant != 2) {
        throw Error(ErrorCode::InvalidArgument, "NearMiss variant must be 1, 2 or 3");
    }

    const auto scores = nearmiss_scores(partition, variant, k, threads);
    std::vector<std::size_t> order(n_maj);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
    });
    order.resize(std::min(target, n_maj));
    return order;
}

// Rebalancing -------------------------------------------------------------

namespace {

RebalanceResult keep_rows(const FeatureMatrix& features, std::span<const int> labels,
                          const std::vector<char>& keep) {
    RebalanceResult out;
    out.features.column_names = features.column_names;
    out.features.values = Matrix(0, features.n_cols());
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (keep[r]) {
            out.features.values.append_row(features.values.row(r));
            out.labels.push_back(labels[r]);
            out.origins.push_back({RowOrigin::Kind::Original, r, std::nullopt, 0.0});
        }
    }
    return out;
}

RebalanceResult identity(const FeatureMatrix& features, std::span<const int> labels) {
    return keep_rows(features, labels, std::vector<char>(labels.size(), 1));
}

std::size_t balancing_multiplier(const ClassPartition& p) {
    const std::size_t n_min = p.minority.rows();
    const std::size_t n_maj = p.majority.rows();
    if (n_min == 0) {
        return 0;
    }
    const std::size_t ratio = n_maj / n_min;
    return ratio > 0 ? ratio - 1 : 0;
}

} // namespace

RebalanceResult rebalance(const FeatureMatrix& features, std::span<const int> labels,
                          const ResampleConfig& config) {
    if (labels.size() != features.n_rows()) {
        throw Error(ErrorCode::LengthMismatch, "one label per feature row required");
    }
    if (config.strategy == ResampleStrategy::None) {
        return identity(features, labels);
    }
    if (config.k == 0) {
        throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    }
    const ClassPartition p = partition_classes(features, labels);

    switch (config.strategy) {
        case ResampleStrategy::None:
            break;
        case ResampleStrategy::Smote: {
            if (p.minority.rows() == 0) {
                throw Error(ErrorCode::EmptyMinority, "SMOTE needs minority rows");
            }
            SmoteParams params;
            params.k = config.k;
            params.multiplier = config.amount.value_or(balancing_multiplier(p));
            params.seed = config.seed;
            params.mode = config.smote_mode;
            params.threads = config.threads;
            const auto synth = smote(p.minority, params);

            RebalanceResult out = identity(features, labels);
            for (std::size_t s = 0; s < synth.samples.rows(); ++s) {
                const auto& o = synth.origins[s];
                out.features.values.append_row(synth.samples.row(s));
                out.labels.push_back(p.minority_label);
                out.origins.push_back({RowOrigin::Kind::Synthetic, p.minority_rows[o.point],
                                       p.minority_rows[o.neighbor], o.u});
            }
            return out;
        }
        case ResampleStrategy::NearMiss1:
        case ResampleStrategy::NearMiss2:
        case ResampleStrategy::NearMiss3: {
            const int variant = config.strategy == ResampleStrategy::NearMiss1   ? 1
                                : config.strategy == ResampleStrategy::NearMiss2 ? 2
                                                                                 : 3;
            const auto kept = nearmiss(p, variant, config.k, config.amount.value_or(p.minority.rows()),
                                       config.threads);
            std::vector<char> keep(labels.size(), 0);
            for (std::size_t r : p.minority_rows) keep[r] = 1;
            for (std::size_t i : kept) keep[p.majority_rows[i]] = 1;
            return keep_rows(features, labels, keep);
        }
        case ResampleStrategy::RandomUnder: {
            const std::size_t target = std::min(config.amount.value_or(p.minority.rows()), p.majority.rows());
            std::vector<std::size_t> order = p.majority_rows;
            Rng rng(config.seed);
            rng.shuffle(order);
            std::vector<char> keep(labels.size(), 0);
            for (std::size_t r : p.minority_rows) keep[r] = 1;
            for (std::size_t i = 0; i < target; ++i) keep[order[i]] = 1;
            return keep_rows(features, labels, keep);
        }
        case ResampleStrategy::RandomOver: {
            const std::size_t target = config.amount.value_or(p.majority.rows());
            RebalanceResult out = identity(features, labels);
            if (target <= p.minority.rows()) {
                return out;
            }
            if (p.minority.rows() == 0) {
                throw Error(ErrorCode::EmptyMinority, "random oversampling needs minority rows");
            }
            Rng rng(config.seed);
            for (std::size_t t = p.minority.rows(); t < target; ++t) {
                const std::size_t src = p.minority_rows[rng.uniform_index(p.minority_rows.size())];
                out.features.values.append_row(features.values.row(src));
                out.labels.push_back(p.minority_label);
                out.origins.push_back({RowOrigin::Kind::Duplicate, src, std::nullopt, 0.0});
            }
            return out;
        }
    }
    throw Error(ErrorCode::StrategyUnknown, "unhandled resampling strategy");
}

void write_provenance_csv(std::ostream& out, const RebalanceResult& result) {
    out << "row,kind,source,neighbor,u\n";
    for (std::size_t r = 0; r < result.origins.size(); ++r) {
        const auto& o = result.origins[r];
        const char* kind = o.kind == RowOrigin::Kind::Original    ? "original"
                           : o.kind == RowOrigin::Kind::Duplicate ? "duplicate"
                                                                  : "synthetic";
        out << r << ',' << kind << ',' << o.source << ',';
        if (o.neighbor) out << *o.neighbor;
        out << ',';
        if (o.kind == RowOrigin::Kind::Synthetic) out << format_number(o.u);
        out << '\n';
    }
}

} // namespace rebal

#include "rebal/error.hpp"
#include "rebal/models.hpp"

#include <cmath>

namespace rebal {

std::string_view to_string(ModelFamily f) noexcept {
    switch (f) {
        case ModelFamily::Logistic: return "lr";
        case ModelFamily::DecisionTree: return "dt";
        case ModelFamily::RandomForest: return "rf";
        case ModelFamily::GradientBoosting: return "xgb";
    }
    return "unknown";
}

std::optional<ModelFamily> parse_model_family(std::string_view text) noexcept {
    if (text == "lr") return ModelFamily::Logistic;
    if (text == "dt") return ModelFamily::DecisionTree;
    if (text == "rf") return ModelFamily::RandomForest;
    if (text == "xgb") return ModelFamily::GradientBoosting;
    return std::nullopt;
}

ModelConfig ModelConfig::defaults_for(ModelFamily family) {
    ModelConfig c;
    c.family = family;
    c.name = std::string(to_string(family));
    switch (family) {
        case ModelFamily::Logistic:
            c.learning_rate = 0.1;
            c.iterations = 500;
            c.l2 = 1e-4;
            c.tolerance = 1e-6;
            break;
        case ModelFamily::DecisionTree:
            c.max_depth = 8;
            c.min_samples_leaf = 5;
            break;
        case ModelFamily::RandomForest:
            c.n_trees = 100;
            c.bootstrap = true;
            c.max_depth = std::nullopt;
            c.min_samples_leaf = 1;
            break;
        case ModelFamily::GradientBoosting:
            c.rounds = 100;
            c.learning_rate = 0.1;
            c.max_depth = 4;
            c.min_samples_leaf = 1;
            c.l2 = 1.0;
            break;
    }
    return c;
}

ModelFamily Model::family() const noexcept {
    switch (fitted_.index()) {
        case 0: return ModelFamily::Logistic;
        case 1: return ModelFamily::DecisionTree;
        case 2: return ModelFamily::RandomForest;
        default: return ModelFamily::GradientBoosting;
    }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double Model::predict_proba_row(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(n_features_) +
                                                      " features, got " + std::to_string(x.size()));
    }
    return std::visit(overloaded{
                          [&](const LinearModel& m) {
                              double z = m.bias;
                              for (std::size_t j = 0; j < x.size(); ++j) z += m.weights[j] * x[j];
                              return sigmoid(z);
                          },
                          [&](const Tree& t) { return t.predict(x); },
                          [&](const ForestModel& f) {
                              double total = 0.0;
                              for (const auto& t : f.trees) total += t.predict(x);
                              return total / static_cast<double>(f.trees.size());
                          },
                          [&](const BoostedModel& b) { return sigmoid(b.raw_score(x)); },
                      },
                      fitted_);
}

std::vector<double> Model::predict_proba(const Matrix& x) const {
    if (x.cols() != n_features_ && !(x.rows() == 0)) {
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(n_features_) +
                                                      " features, got " + std::to_string(x.cols()));
    }
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out[i] = predict_proba_row(x.row(i));
    }
    return out;
}

// JSON --------------------------------------------------------------------

namespace {

nlohmann::json node_to_json(const Tree& t, std::size_t i) {
    const auto& n = t.nodes[i];
    if (n.is_leaf()) {
        return {{"leaf", n.value}, {"samples", n.samples}, {"impurity", n.impurity}};
    }
    return {{"feature", n.feature},
            {"threshold", n.threshold},
            {"value", n.value},
            {"samples", n.samples},
            {"impurity", n.impurity},
            {"left", node_to_json(t, static_cast<std::size_t>(n.left))},
            {"right", node_to_json(t, static_cast<std::size_t>(n.right))}};
}

nlohmann::json tree_to_json(const Tree& t) { return node_to_json(t, 0); }

std::size_t node_from_json(Tree& t, const nlohmann::json& j) {
    const std::size_t id = t.nodes.size();
    t.nodes.emplace_back();
    TreeNode node;
    node.samples = j.value("samples", std::size_t{0});
    node.impurity = j.value("impurity", 0.0);
    if (j.contains("leaf")) {
        node.value = j.at("leaf").get<double>();
        t.nodes[id] = node;
        return id;
    }
    node.feature = j.at("feature").get<std::int32_t>();
    node.threshold = j.at("threshold").get<double>();
    node.value = j.value("value", 0.0);
    t.nodes[id] = node;
    const std::size_t l = node_from_json(t, j.at("left"));
    t.nodes[id].left = static_cast<std::int32_t>(l);
    const std::size_t r = node_from_json(t, j.at("right"));
    t.nodes[id].right = static_cast<std::int32_t>(r);
    return id;
}

Tree tree_from_json(const nlohmann::json& j) {
    Tree t;
    node_from_json(t, j);
    return t;
}

nlohmann::json trees_to_json(const std::vector<Tree>& trees) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trees) arr.push_back(tree_to_json(t));
    return arr;
}

std::vector<Tree> trees_from_json(const nlohmann::json& j) {
    std::vector<Tree> out;
    for (const auto& t : j) out.push_back(tree_from_json(t));
    return out;
}

} // namespace

nlohmann::json Model::to_json() const {
    nlohmann::json j{{"version", "model_v1"}, {"family", to_string(family())}, {"n_features", n_features_}};
    std::visit(overloaded{
                   [&](const LinearModel& m) {
                       j["weights"] = m.weights;
                       j["bias"] = m.bias;
                       j["final_loss"] = m.final_loss;
                       j["iterations"] = m.iterations;
                   },
                   [&](const Tree& t) { j["tree"] = tree_to_json(t); },
                   [&](const ForestModel& f) {
                       j["max_features"] = f.max_features;
                       j["bootstrap"] = f.bootstrap;
                       j["seed"] = f.seed;
                       j["trees"] = trees_to_json(f.trees);
                   },
                   [&](const BoostedModel& b) {
                       j["base_score"] = b.base_score;
                       j["learning_rate"] = b.learning_rate;
                       j["l2_lambda"] = b.l2_lambda;
                       j["rounds"] = b.rounds;
                       j["trees"] = trees_to_json(b.trees);
                   },
               },
               fitted_);
    return j;
}

Model Model::from_json(const nlohmann::json& j) {
    try {
        if (j.at("version").get<std::string>() != "model_v1") {
            throw Error(ErrorCode::ParseError, "unsupported model version");
        }
        const auto family = parse_model_family(j.at("family").get<std::string>());
        if (!family) {
            throw Error(ErrorCode::ParseError, "unknown model family");
        }
        const auto n_features = j.at("n_features").get<std::size_t>();
        switch (*family) {
            case ModelFamily::Logistic: {
                LinearModel m;
                m.weights = j.at("weights").get<std::vector<double>>();
                m.bias = j.at("bias").get<double>();
                m.final_loss = j.value("final_loss", 0.0);
                m.iterations = j.value("iterations", std::size_t{0});
                return Model(std::move(m), n_features);
            }
            case ModelFamily::DecisionTree:
                return Model(tree_from_json(j.at("tree")), n_features);
            case ModelFamily::RandomForest: {
                ForestModel f;
                f.max_features = j.at("max_features").get<std::size_t>();
                f.bootstrap = j.at("bootstrap").get<bool>();
                f.seed = j.at("seed").get<std::uint64_t>();
                f.trees = trees_from_json(j.at("trees"));
                return Model(std::move(f), n_features);
            }
            case ModelFamily::GradientBoosting: {
                BoostedModel b;
                b.base_score = j.at("base_score").get<double>();
                b.learning_rate = j.at("learning_rate").get<double>();
                b.l2_lambda = j.at("l2_lambda").get<double>();
                b.rounds = j.at("rounds").get<std::size_t>();
                b.trees = trees_from_json(j.at("trees"));
                return Model(std::move(b), n_features);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model: ") + e.what());
    }
    throw Error(ErrorCode::ParseError, "unreachable model family");
}

Model fit_model(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg) {
    switch (cfg.family) {
        case ModelFamily::Logistic: return Model(fit_logistic(x, y, cfg), x.n_cols());
        case ModelFamily::DecisionTree: return Model(fit_tree(x, y, cfg), x.n_cols());
        case ModelFamily::RandomForest: return Model(fit_forest(x, y, cfg), x.n_cols());
        case ModelFamily::GradientBoosting: return Model(fit_gbt(x, y, cfg), x.n_cols());
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model family");
}

std::vector<int> classify(std::span<const double> probabilities, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1)");
    }
    std::vector<int> out(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        out[i] = probabilities[i] >= threshold ? 1 : 0;
    }
    return out;
}

} // namespace rebal

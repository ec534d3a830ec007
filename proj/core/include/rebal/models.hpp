#pragma once

#include "rebal/matrix.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rebal {

enum class ModelFamily { Logistic, DecisionTree, RandomForest, GradientBoosting };

/// "lr", "dt", "rf", "xgb"
std::string_view to_string(ModelFamily f) noexcept;
std::optional<ModelFamily> parse_model_family(std::string_view text) noexcept;

/// Hyperparameters for every family; fields a family does not use are ignored.
struct ModelConfig {
    std::string name;
    ModelFamily family = ModelFamily::Logistic;

    double learning_rate = 0.1;    ///< LR step size, boosting shrinkage
    std::size_t iterations = 500;  ///< LR gradient steps
    double tolerance = 1e-6;       ///< LR stop when |gradient|_inf falls below
    double l2 = 1e-4;              ///< LR weight penalty, boosting leaf penalty

    std::optional<std::size_t> max_depth = 8; ///< unset: unlimited
    std::size_t min_samples_leaf = 5;

    std::size_t n_trees = 100;
    bool bootstrap = true;
    std::optional<std::size_t> max_features; ///< unset: ceil(sqrt(n_features))

    std::size_t rounds = 100;

    std::uint64_t seed = 0;
    double threshold = 0.5;
    unsigned threads = 1;

    /// Documented defaults for a family.
    static ModelConfig defaults_for(ModelFamily family);
};

// Logistic regression -----------------------------------------------------

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double final_loss = 0.0;
    std::size_t iterations = 0;
    std::vector<double> loss_history; ///< objective before each step, then the final value

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// Mean log-loss plus (l2/2)|w|^2 and its gradient.
struct LogisticObjective {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

LogisticObjective logistic_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                                     double bias, double l2);

/// Full-batch gradient descent from zero weights.
LinearModel fit_logistic(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg);

double sigmoid(double z) noexcept;

// Trees -------------------------------------------------------------------

/// Flat binary tree node; children are indices into Tree::nodes.
struct TreeNode {
    static constexpr std::int32_t kLeaf = -1;

    std::int32_t feature = kLeaf;
    double threshold = 0.0;  ///< x[feature] <= threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;      ///< positive fraction (CART) or raw additive score (boosting)
    std::size_t samples = 0;
    double impurity = 0.0;   ///< Gini for CART nodes, 0 for boosting nodes

    bool is_leaf() const noexcept { return feature == kLeaf; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
    std::vector<TreeNode> nodes; ///< nodes[0] is the root

    double predict(std::span<const double> x) const;
    std::size_t depth() const;
    std::size_t leaf_count() const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

/// CART classification tree grown on weighted Gini impurity.
Tree fit_tree(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg);

struct ForestModel {
    std::vector<Tree> trees;
    std::size_t max_features = 0;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

ForestModel fit_forest(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg);

struct BoostedModel {
    double base_score = 0.0;
    std::vector<Tree> trees;
    double learning_rate = 0.1;
    double l2_lambda = 1.0;
    std::size_t rounds = 0;

    double raw_score(std::span<const double> x) const;

    friend bool operator==(const BoostedModel&, const BoostedModel&) = default;
};

/// Second-order gradient boosting on log-loss with exact greedy splits.
BoostedModel fit_gbt(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg);

/// Training log-loss helper shared by tests and tools.
double mean_log_loss(std::span<const double> probabilities, std::span<const int> y);

// Uniform model contract --------------------------------------------------

class Model {
public:
    using Variant = std::variant<LinearModel, Tree, ForestModel, BoostedModel>;

    Model(Variant fitted, std::size_t n_features) : fitted_(std::move(fitted)), n_features_(n_features) {}

    ModelFamily family() const noexcept;
    std::size_t n_features() const noexcept { return n_features_; }
    const Variant& fitted() const noexcept { return fitted_; }

    /// Throws DimensionMismatch when the column count differs from training.
    std::vector<double> predict_proba(const Matrix& x) const;
    double predict_proba_row(std::span<const double> x) const;

    nlohmann::json to_json() const;
    static Model from_json(const nlohmann::json& j);

    friend bool operator==(const Model&, const Model&) = default;

private:
    Variant fitted_;
    std::size_t n_features_ = 0;
};

Model fit_model(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg);

/// Label 1 iff probability >= threshold.
std::vector<int> classify(std::span<const double> probabilities, double threshold);

} // namespace rebal

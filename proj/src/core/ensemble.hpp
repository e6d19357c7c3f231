#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/linear.hpp"
#include "core/rng.hpp"
#include "core/tree.hpp"

namespace lvef {

struct FeatureVector {
    double area = 0.0;
    double width = 0.0;
    double height = 0.0;

    std::array<double, 3> values() const { return {area, width, height}; }
};

struct EnsembleConfig {
    int et_trees = 100;
    int et_max_depth = -1; // grow until pure
    int ada_rounds = 50;
    int ada_tree_depth = 3;
    int gbdt_rounds = 100;
    int gbdt_tree_depth = 3;
    double gbdt_shrinkage = 0.1;
    std::vector<double> lasso_lambda_grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
    double ridge_lambda = 1.0;
    int knn_k = 5;
    int k_folds = 5;
    std::uint64_t seed = 42;
};

// AdaBoost.R2 with linear loss: trees trained on weighted bootstrap
// resamples, combined by the alpha-weighted median. loss_trace records the
// average loss of each kept round.
struct AdaBoostModel {
    std::vector<Tree> trees;
    std::vector<double> alphas;
    std::vector<double> loss_trace;

    double predict(const std::array<double, 3>& x) const;
};

// Least-squares gradient boosting; mse_trace holds the training MSE after
// each round and never increases.
struct GbdtModel {
    double baseline = 0.0;
    double shrinkage = 0.1;
    std::vector<Tree> trees;
    std::vector<double> mse_trace;

    double predict(const std::array<double, 3>& x) const;
};

// Mean target of the k nearest training points (standardized coordinates,
// ties by distance then insertion index).
struct KnnModel {
    int k = 5;
    std::vector<std::array<double, 3>> points;
    std::vector<double> targets;

    double predict(const std::array<double, 3>& z) const;
};

// Ridge + KNN + GBDT blended by non-negative least squares fitted on
// out-of-fold predictions.
struct StackModel {
    LinearModel ridge;
    KnnModel knn;
    GbdtModel gbdt;
    std::array<double, 3> weights{0.0, 0.0, 0.0};
};

struct LengthModel {
    bool trained = false;
    Standardizer standardizer; // feeds Lasso, Ridge and KNN; trees take raw features
    std::vector<Tree> extra_trees;
    AdaBoostModel adaboost;
    LassoFit lasso;
    StackModel stack;
};

enum class BaseKind { ET, ADABOOST, LASSO, RIDGE, KNN, GBDT };

// A single trained member, mostly for inspecting the ensemble's parts.
struct BaseModel {
    BaseKind kind = BaseKind::ET;
    Standardizer standardizer;
    std::vector<Tree> et;
    AdaBoostModel adaboost;
    LassoFit lasso;
    LinearModel ridge;
    KnnModel knn;
    GbdtModel gbdt;
};

LengthModel train_voting_ensemble(const std::vector<FeatureVector>& features,
                                  const std::vector<double>& lengths,
                                  const EnsembleConfig& config);

// Plain mean of the four base predictions.
double predict_length(const LengthModel& model, const FeatureVector& f);

// Individual member predictions, exposed so the voting identity is checkable.
double predict_trees_mean(const std::vector<Tree>& trees, const std::array<double, 3>& x);
double predict_stack(const StackModel& stack, const std::array<double, 3>& z,
                     const std::array<double, 3>& x);

BaseModel train_base(BaseKind kind, const std::vector<FeatureVector>& features,
                     const std::vector<double>& lengths, const EnsembleConfig& config);
double predict_base(const BaseModel& model, const FeatureVector& f);

struct KfoldResult {
    std::vector<double> per_fold;
    double mean = 0.0;
};

// Held-out R2 of the full voting ensemble over a seeded k-fold partition.
KfoldResult kfold_r2(const std::vector<FeatureVector>& features,
                     const std::vector<double>& lengths, const EnsembleConfig& config);

// fold id per sample: a seeded shuffle cut into k nearly equal blocks.
std::vector<int> fold_assignment(std::size_t n, int k, Rng& rng);

// Versioned JSON, trees stored as nested records. Round-trips bit-exactly.
void save_model(const LengthModel& model, const std::string& path);
LengthModel load_model(const std::string& path);

} // namespace lvef

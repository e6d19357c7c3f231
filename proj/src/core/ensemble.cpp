#include "core/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/stats.hpp"

namespace lvef {

namespace {

using nlohmann::json;

// Substream tags keep every randomized stage independent of the others.
constexpr std::uint64_t kAdaStream = 2;
constexpr std::uint64_t kLassoFoldStream = 3;
constexpr std::uint64_t kStackFoldStream = 4;
constexpr std::uint64_t kKfoldStream = 5;
constexpr std::uint64_t kEtStreamBase = 100; // + tree index

void validate_training_data(const std::vector<FeatureVector>& features,
                            const std::vector<double>& lengths, std::size_t min_samples) {
    if (features.size() != lengths.size()) {
        fail(errc::length_mismatch, std::to_string(features.size()) + " feature rows vs " +
                                        std::to_string(lengths.size()) + " targets");
    }
    if (features.size() < min_samples) {
        fail(errc::insufficient_data, "need at least " + std::to_string(min_samples) +
                                          " samples, got " + std::to_string(features.size()));
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto v = features[i].values();
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]) ||
            !std::isfinite(lengths[i])) {
            fail(errc::non_finite_input, "non-finite value in sample " + std::to_string(i));
        }
    }
}

std::vector<std::array<double, 3>> raw_rows(const std::vector<FeatureVector>& features) {
    std::vector<std::array<double, 3>> rows;
    rows.reserve(features.size());
    for (const FeatureVector& f : features) rows.push_back(f.values());
    return rows;
}

std::vector<std::array<double, 3>> standardize_rows(const Standardizer& s,
                                                    const std::vector<std::array<double, 3>>& xs) {
    std::vector<std::array<double, 3>> zs;
    zs.reserve(xs.size());
    for (const auto& x : xs) zs.push_back(s.apply(x));
    return zs;
}

std::vector<int> all_indices(std::size_t n) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& values, const std::vector<int>& folds, int fold,
                    bool inside) {
    std::vector<T> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if ((folds[i] == fold) == inside) out.push_back(values[i]);
    }
    return out;
}

std::vector<Tree> train_extra_trees(const std::vector<std::array<double, 3>>& xs,
                                    const std::vector<double>& ys, const EnsembleConfig& config) {
    TreeParams params;
    params.max_depth = config.et_max_depth;
    params.random_thresholds = true;
    const std::vector<int> idx = all_indices(xs.size());
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(config.et_trees));
    for (int t = 0; t < config.et_trees; ++t) {
        Rng rng = Rng::substream(config.seed, kEtStreamBase + static_cast<std::uint64_t>(t));
        trees.push_back(fit_tree(xs, ys, idx, params, &rng));
    }
    return trees;
}

AdaBoostModel train_adaboost(const std::vector<std::array<double, 3>>& xs,
                             const std::vector<double>& ys, const EnsembleConfig& config,
                             Rng rng) {
    const std::size_t n = xs.size();
    AdaBoostModel model;
    TreeParams params;
    params.max_depth = config.ada_tree_depth;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<double> cdf(n);
    std::vector<int> resample(n);
    std::vector<double> errors(n);

    for (int round = 0; round < config.ada_rounds; ++round) {
        std::partial_sum(weights.begin(), weights.end(), cdf.begin());
        for (std::size_t d = 0; d < n; ++d) {
            const double u = rng.next_double() * cdf.back();
            auto at = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (at >= n) at = n - 1;
            resample[d] = static_cast<int>(at);
        }
        Tree tree = fit_tree(xs, ys, resample, params);

        double max_error = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            errors[i] = std::abs(ys[i] - tree.predict(xs[i]));
            max_error = std::max(max_error, errors[i]);
        }
        if (max_error == 0.0) {
            model.trees.push_back(std::move(tree));
            model.alphas.push_back(std::log(1.0 / 1e-10));
            model.loss_trace.push_back(0.0);
            break;
        }

        double avg_loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) avg_loss += weights[i] * (errors[i] / max_error);
        if (avg_loss >= 0.5) {
            if (model.trees.empty()) {
                // Keep something usable; a one-tree median ignores the alpha.
                model.trees.push_back(std::move(tree));
                model.alphas.push_back(1.0);
                model.loss_trace.push_back(avg_loss);
            }
            break;
        }

        const double beta = avg_loss / (1.0 - avg_loss);
        model.trees.push_back(std::move(tree));
        model.alphas.push_back(std::log(1.0 / beta));
        model.loss_trace.push_back(avg_loss);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] *= std::pow(beta, 1.0 - errors[i] / max_error);
            total += weights[i];
        }
        for (double& w : weights) w /= total;
    }
    return model;
}

GbdtModel train_gbdt(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                     int rounds, int depth, double shrinkage) {
    const std::size_t n = xs.size();
    GbdtModel model;
    model.shrinkage = shrinkage;
    model.baseline = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);

    TreeParams params;
    params.max_depth = depth;
    const std::vector<int> idx = all_indices(n);
    std::vector<double> pred(n, model.baseline);
    std::vector<double> residual(n);

    for (int round = 0; round < rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = ys[i] - pred[i];
        Tree tree = fit_tree(xs, residual, idx, params);
        for (std::size_t i = 0; i < n; ++i) pred[i] += shrinkage * tree.predict(xs[i]);
        model.trees.push_back(std::move(tree));

        long double sq = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const long double r = static_cast<long double>(ys[i]) - pred[i];
            sq += r * r;
        }
        model.mse_trace.push_back(static_cast<double>(sq / static_cast<long double>(n)));
    }
    return model;
}

LassoFit train_lasso_cv(const std::vector<std::array<double, 3>>& zs,
                        const std::vector<double>& ys, const EnsembleConfig& config) {
    if (config.lasso_lambda_grid.empty()) {
        fail(errc::invalid_argument, "empty lasso penalty grid");
    }
    if (config.lasso_lambda_grid.size() == 1 ||
        zs.size() < static_cast<std::size_t>(config.k_folds)) {
        return fit_lasso(zs, ys, config.lasso_lambda_grid.front());
    }

    Rng rng = Rng::substream(config.seed, kLassoFoldStream);
    const std::vector<int> folds = fold_assignment(zs.size(), config.k_folds, rng);

    double best_lambda = config.lasso_lambda_grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (const double lambda : config.lasso_lambda_grid) {
        double sq = 0.0;
        std::size_t count = 0;
        for (int f = 0; f < config.k_folds; ++f) {
            const auto train_z = pick(zs, folds, f, false);
            const auto train_y = pick(ys, folds, f, false);
            const auto val_z = pick(zs, folds, f, true);
            const auto val_y = pick(ys, folds, f, true);
            const LassoFit fit = fit_lasso(train_z, train_y, lambda);
            for (std::size_t i = 0; i < val_z.size(); ++i) {
                const double e = fit.model.predict(val_z[i]) - val_y[i];
                sq += e * e;
            }
            count += val_z.size();
        }
        const double mse = sq / static_cast<double>(count);
        if (mse < best_mse) {
            best_mse = mse;
            best_lambda = lambda;
        }
    }
    return fit_lasso(zs, ys, best_lambda);
}

StackModel train_stack(const std::vector<std::array<double, 3>>& zs,
                       const std::vector<std::array<double, 3>>& raw,
                       const std::vector<double>& ys, const EnsembleConfig& config) {
    StackModel stack;
    stack.ridge = fit_ridge(zs, ys, config.ridge_lambda);
    stack.knn.k = config.knn_k;
    stack.knn.points = zs;
    stack.knn.targets = ys;
    stack.gbdt = train_gbdt(raw, ys, config.gbdt_rounds, config.gbdt_tree_depth,
                            config.gbdt_shrinkage);

    Rng rng = Rng::substream(config.seed, kStackFoldStream);
    const std::vector<int> folds = fold_assignment(zs.size(), config.k_folds, rng);
    std::vector<std::array<double, 3>> oof(zs.size(), {0.0, 0.0, 0.0});
    for (int f = 0; f < config.k_folds; ++f) {
        const auto train_z = pick(zs, folds, f, false);
        const auto train_raw = pick(raw, folds, f, false);
        const auto train_y = pick(ys, folds, f, false);
        const LinearModel ridge_f = fit_ridge(train_z, train_y, config.ridge_lambda);
        KnnModel knn_f;
        knn_f.k = config.knn_k;
        knn_f.points = train_z;
        knn_f.targets = train_y;
        const GbdtModel gbdt_f = train_gbdt(train_raw, train_y, config.gbdt_rounds,
                                            config.gbdt_tree_depth, config.gbdt_shrinkage);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            if (folds[i] != f) continue;
            oof[i] = {ridge_f.predict(zs[i]), knn_f.predict(zs[i]), gbdt_f.predict(raw[i])};
        }
    }
    stack.weights = nnls3(oof, ys);
    return stack;
}

json tree_node_to_json(const Tree& tree, int at) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) return json{{"value", node.value}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_node_to_json(tree, node.left)},
                {"right", tree_node_to_json(tree, node.right)}};
}

json tree_to_json(const Tree& tree) { return tree_node_to_json(tree, 0); }

int tree_node_from_json(const json& j, Tree& tree) {
    const int slot = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("value")) {
        tree.nodes[static_cast<std::size_t>(slot)].value = j.at("value").get<double>();
        return slot;
    }
    const int feature = j.at("feature").get<int>();
    const double threshold = j.at("threshold").get<double>();
    if (feature < 0 || feature > 2) fail(errc::corrupt_model, "split feature out of range");
    const int left = tree_node_from_json(j.at("left"), tree);
    const int right = tree_node_from_json(j.at("right"), tree);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(slot)];
    node.feature = feature;
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    return slot;
}

Tree tree_from_json(const json& j) {
    Tree tree;
    tree_node_from_json(j, tree);
    return tree;
}

json trees_to_json(const std::vector<Tree>& trees) {
    json arr = json::array();
    for (const Tree& t : trees) arr.push_back(tree_to_json(t));
    return arr;
}

std::vector<Tree> trees_from_json(const json& arr) {
    std::vector<Tree> trees;
    for (const json& j : arr) trees.push_back(tree_from_json(j));
    return trees;
}

template <std::size_t N>
json array_to_json(const std::array<double, N>& a) {
    return json(std::vector<double>(a.begin(), a.end()));
}

template <std::size_t N>
std::array<double, N> array_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != N) fail(errc::corrupt_model, "expected " + std::to_string(N) + " numbers");
    std::array<double, N> out;
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "lv-length-model";

} // namespace

double predict_trees_mean(const std::vector<Tree>& trees, const std::array<double, 3>& x) {
    double sum = 0.0;
    for (const Tree& t : trees) sum += t.predict(x);
    return sum / static_cast<double>(trees.size());
}


double AdaBoostModel::predict(const std::array<double, 3>& x) const {
    if (trees.empty()) fail(errc::untrained_model, "boosting model has no trees");
    std::vector<std::pair<double, double>> by_value; // (prediction, alpha)
    by_value.reserve(trees.size());
    for (std::size_t t = 0; t < trees.size(); ++t) {
        by_value.emplace_back(trees[t].predict(x), alphas[t]);
    }
    std::stable_sort(by_value.begin(), by_value.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (const auto& [pred, alpha] : by_value) total += alpha;
    double cum = 0.0;
    for (const auto& [pred, alpha] : by_value) {
        cum += alpha;
        if (cum >= 0.5 * total) return pred;
    }
    return by_value.back().first;
}

double GbdtModel::predict(const std::array<double, 3>& x) const {
    double out = baseline;
    for (const Tree& t : trees) out += shrinkage * t.predict(x);
    return out;
}

double KnnModel::predict(const std::array<double, 3>& z) const {
    if (points.empty()) fail(errc::untrained_model, "nearest-neighbor model has no points");
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = points[i][0] - z[0];
        const double dy = points[i][1] - z[1];
        const double dz = points[i][2] - z[2];
        order.emplace_back(dx * dx + dy * dy + dz * dz, i);
    }
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += targets[order[i].second];
    return sum / static_cast<double>(take);
}

double predict_stack(const StackModel& stack, const std::array<double, 3>& z,
                     const std::array<double, 3>& x) {
    return stack.weights[0] * stack.ridge.predict(z) + stack.weights[1] * stack.knn.predict(z) +
           stack.weights[2] * stack.gbdt.predict(x);
}

std::vector<int> fold_assignment(std::size_t n, int k, Rng& rng) {
    if (k < 2) fail(errc::invalid_argument, "need at least 2 folds");
    if (n < static_cast<std::size_t>(k)) {
        fail(errc::insufficient_data,
             std::to_string(n) + " samples cannot fill " + std::to_string(k) + " folds");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    shuffle_indices(perm, rng);
    std::vector<int> folds(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        folds[perm[j]] = static_cast<int>(j * static_cast<std::size_t>(k) / n);
    }
    return folds;
}

LengthModel train_voting_ensemble(const std::vector<FeatureVector>& features,
                                  const std::vector<double>& lengths,
                                  const EnsembleConfig& config) {
    validate_training_data(features, lengths, 10);
    if (config.et_trees < 1 || config.ada_rounds < 1 || config.gbdt_rounds < 1 ||
        config.knn_k < 1 || config.gbdt_shrinkage <= 0.0 || config.ridge_lambda < 0.0) {
        fail(errc::invalid_argument, "ensemble hyperparameters out of range");
    }

    const auto raw = raw_rows(features);
    LengthModel model;
    model.standardizer = fit_standardizer(raw);
    const auto zs = standardize_rows(model.standardizer, raw);

    model.extra_trees = train_extra_trees(raw, lengths, config);
    model.adaboost = train_adaboost(raw, lengths, config, Rng::substream(config.seed, kAdaStream));
    model.lasso = train_lasso_cv(zs, lengths, config);
    model.stack = train_stack(zs, raw, lengths, config);
    model.trained = true;
    return model;
}

double predict_length(const LengthModel& model, const FeatureVector& f) {
    if (!model.trained) fail(errc::untrained_model, "length model is untrained");
    const auto x = f.values();
    const auto z = model.standardizer.apply(x);
    const double et = predict_trees_mean(model.extra_trees, x);
    const double ada = model.adaboost.predict(x);
    const double lasso = model.lasso.model.predict(z);
    const double stack = predict_stack(model.stack, z, x);
    return (et + ada + lasso + stack) / 4.0;
}

BaseModel train_base(BaseKind kind, const std::vector<FeatureVector>& features,
                     const std::vector<double>& lengths, const EnsembleConfig& config) {
    validate_training_data(features, lengths, 10);
    const auto raw = raw_rows(features);
    BaseModel model;
    model.kind = kind;
    model.standardizer = fit_standardizer(raw);
    const auto zs = standardize_rows(model.standardizer, raw);
    switch (kind) {
    case BaseKind::ET:
        model.et = train_extra_trees(raw, lengths, config);
        break;
    case BaseKind::ADABOOST:
        model.adaboost =
            train_adaboost(raw, lengths, config, Rng::substream(config.seed, kAdaStream));
        break;
    case BaseKind::LASSO:
        model.lasso = train_lasso_cv(zs, lengths, config);
        break;
    case BaseKind::RIDGE:
        model.ridge = fit_ridge(zs, lengths, config.ridge_lambda);
        break;
    case BaseKind::KNN:
        model.knn.k = config.knn_k;
        model.knn.points = zs;
        model.knn.targets = lengths;
        break;
    case BaseKind::GBDT:
        model.gbdt = train_gbdt(raw, lengths, config.gbdt_rounds, config.gbdt_tree_depth,
                                config.gbdt_shrinkage);
        break;
    }
    return model;
}

double predict_base(const BaseModel& model, const FeatureVector& f) {
    const auto x = f.values();
    const auto z = model.standardizer.apply(x);
    switch (model.kind) {
    case BaseKind::ET:
        if (model.et.empty()) fail(errc::untrained_model, "no trees");
        return predict_trees_mean(model.et, x);
    case BaseKind::ADABOOST:
        return model.adaboost.predict(x);
    case BaseKind::LASSO:
        return model.lasso.model.predict(z);
    case BaseKind::RIDGE:
        return model.ridge.predict(z);
    case BaseKind::KNN:
        return model.knn.predict(z);
    case BaseKind::GBDT:
        if (model.gbdt.trees.empty()) fail(errc::untrained_model, "no trees");
        return model.gbdt.predict(x);
    }
    fail(errc::invalid_argument, "unknown base model kind");
}

KfoldResult kfold_r2(const std::vector<FeatureVector>& features,
                     const std::vector<double>& lengths, const EnsembleConfig& config) {
    validate_training_data(features, lengths, static_cast<std::size_t>(config.k_folds));
    Rng rng = Rng::substream(config.seed, kKfoldStream);
    const std::vector<int> folds = fold_assignment(features.size(), config.k_folds, rng);

    KfoldResult result;
    for (int f = 0; f < config.k_folds; ++f) {
        const auto train_x = pick(features, folds, f, false);
        const auto train_y = pick(lengths, folds, f, false);
        const auto test_x = pick(features, folds, f, true);
        const auto test_y = pick(lengths, folds, f, true);
        const LengthModel model = train_voting_ensemble(train_x, train_y, config);
        std::vector<double> pred;
        pred.reserve(test_x.size());
        for (const FeatureVector& x : test_x) pred.push_back(predict_length(model, x));
        result.per_fold.push_back(stats::r2_score(test_y, pred));
    }
    result.mean = std::accumulate(result.per_fold.begin(), result.per_fold.end(), 0.0) /
                  static_cast<double>(result.per_fold.size());
    return result;
}

void save_model(const LengthModel& model, const std::string& path) {
    if (!model.trained) fail(errc::untrained_model, "refusing to save an untrained model");
    json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelVersion;
    doc["standardizer"] = {{"mean", array_to_json(model.standardizer.mean)},
                           {"scale", array_to_json(model.standardizer.scale)}};
    doc["extra_trees"] = trees_to_json(model.extra_trees);
    doc["adaboost"] = {{"trees", trees_to_json(model.adaboost.trees)},
                       {"alphas", model.adaboost.alphas},
                       {"loss_trace", model.adaboost.loss_trace}};
    doc["lasso"] = {{"coef", array_to_json(model.lasso.model.coef)},
                    {"intercept", model.lasso.model.intercept},
                    {"lambda", model.lasso.lambda},
                    {"objective_trace", model.lasso.objective_trace}};
    json knn;
    knn["k"] = model.stack.knn.k;
    knn["points"] = json::array();
    for (const auto& p : model.stack.knn.points) knn["points"].push_back(array_to_json(p));
    knn["targets"] = model.stack.knn.targets;
    doc["stack"] = {{"ridge",
                     {{"coef", array_to_json(model.stack.ridge.coef)},
                      {"intercept", model.stack.ridge.intercept}}},
                    {"knn", knn},
                    {"gbdt",
                     {{"baseline", model.stack.gbdt.baseline},
                      {"shrinkage", model.stack.gbdt.shrinkage},
                      {"trees", trees_to_json(model.stack.gbdt.trees)},
                      {"mse_trace", model.stack.gbdt.mse_trace}}},
                    {"weights", array_to_json(model.stack.weights)}};
    write_text_atomic(path, doc.dump(2) + "\n");
}

LengthModel load_model(const std::string& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(errc::corrupt_model, std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || !doc.at("version").is_number_integer()) {
        fail(errc::corrupt_model, "missing integer version field");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
        fail(errc::version_mismatch, "model version " + std::to_string(version) +
                                         ", this build reads version " +
                                         std::to_string(kModelVersion));
    }

    LengthModel model;
    try {
        if (doc.contains("format") && doc.at("format").get<std::string>() != kModelFormat) {
            fail(errc::corrupt_model, "unexpected format tag");
        }
        const json& std_j = doc.at("standardizer");
        model.standardizer.mean = array_from_json<3>(std_j.at("mean"));
        model.standardizer.scale = array_from_json<3>(std_j.at("scale"));
        model.extra_trees = trees_from_json(doc.at("extra_trees"));
        const json& ada = doc.at("adaboost");
        model.adaboost.trees = trees_from_json(ada.at("trees"));
        model.adaboost.alphas = ada.at("alphas").get<std::vector<double>>();
        model.adaboost.loss_trace = ada.at("loss_trace").get<std::vector<double>>();
        if (model.adaboost.trees.size() != model.adaboost.alphas.size()) {
            fail(errc::corrupt_model, "boosting trees and alphas differ in count");
        }
        const json& lasso = doc.at("lasso");
        model.lasso.model.coef = array_from_json<3>(lasso.at("coef"));
        model.lasso.model.intercept = lasso.at("intercept").get<double>();
        model.lasso.lambda = lasso.at("lambda").get<double>();
        model.lasso.objective_trace = lasso.at("objective_trace").get<std::vector<double>>();
        const json& stack = doc.at("stack");
        model.stack.ridge.coef = array_from_json<3>(stack.at("ridge").at("coef"));
        model.stack.ridge.intercept = stack.at("ridge").at("intercept").get<double>();
        const json& knn = stack.at("knn");
        model.stack.knn.k = knn.at("k").get<int>();
        for (const json& p : knn.at("points")) {
            model.stack.knn.points.push_back(array_from_json<3>(p));
        }
        model.stack.knn.targets = knn.at("targets").get<std::vector<double>>();
        if (model.stack.knn.k < 1 ||
            model.stack.knn.points.size() != model.stack.knn.targets.size()) {
            fail(errc::corrupt_model, "bad nearest-neighbor table");
        }
        const json& gbdt = stack.at("gbdt");
        model.stack.gbdt.baseline = gbdt.at("baseline").get<double>();
        model.stack.gbdt.shrinkage = gbdt.at("shrinkage").get<double>();
        model.stack.gbdt.trees = trees_from_json(gbdt.at("trees"));
        model.stack.gbdt.mse_trace = gbdt.at("mse_trace").get<std::vector<double>>();
        model.stack.weights = array_from_json<3>(stack.at("weights"));
    } catch (const json::exception& e) {
        fail(errc::corrupt_model, std::string("model field error: ") + e.what());
    }
    model.trained = true;
    return model;
}

} // namespace lvef

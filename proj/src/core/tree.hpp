#pragma once

#include <array>
#include <vector>

#include "core/rng.hpp"

namespace lvef {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

// Binary regression tree over (area, width, height). Nodes are stored
// pre-order, root first; traversal goes left when x[feature] <= threshold.
struct Tree {
    std::vector<TreeNode> nodes;

    double predict(const std::array<double, 3>& x) const;
};

struct TreeParams {
    int max_depth = -1; // -1 = grow until pure
    int min_samples_leaf = 1;
    // Extra-trees style when true: one uniform threshold per feature instead
    // of an exhaustive scan. Requires an rng.
    bool random_thresholds = false;
};

// sample_idx selects (with possible repeats) the training rows to fit on.
// Ties during the exhaustive scan go to the lower feature index, then the
// smaller threshold, so refits on identical data are identical.
Tree fit_tree(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
              const std::vector<int>& sample_idx, const TreeParams& params, Rng* rng = nullptr);

} // namespace lvef

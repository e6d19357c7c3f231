#include "core/tree.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>

#include "core/errors.hpp"

namespace lvef {

namespace {

constexpr int kFeatureCount = 3;

struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double children_sse = std::numeric_limits<double>::infinity();
};

double subset_mean(const std::vector<double>& ys, const std::vector<int>& idx) {
    double sum = 0.0;
    for (int i : idx) sum += ys[i];
    return sum / static_cast<double>(idx.size());
}

bool is_pure(const std::vector<double>& ys, const std::vector<int>& idx) {
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (ys[idx[i]] != ys[idx[0]]) return false;
    }
    return true;
}

// SSE of both sides of every admissible threshold for one feature, by
// prefix sums over the rows sorted on that feature.
void scan_feature(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                  std::vector<int>& order, int feature, int min_leaf, Split& best) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (xs[a][feature] != xs[b][feature]) return xs[a][feature] < xs[b][feature];
        return a < b;
    });
    const std::size_t n = order.size();

    std::vector<double> pre_sum(n + 1, 0.0);
    std::vector<double> pre_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = ys[order[i]];
        pre_sum[i + 1] = pre_sum[i] + y;
        pre_sq[i + 1] = pre_sq[i] + y * y;
    }

    for (std::size_t k = static_cast<std::size_t>(min_leaf); k + min_leaf <= n; ++k) {
        const double lo = xs[order[k - 1]][feature];
        const double hi = xs[order[k]][feature];
        if (lo == hi) continue;
        const double nl = static_cast<double>(k);
        const double nr = static_cast<double>(n - k);
        const double sse_l = pre_sq[k] - pre_sum[k] * pre_sum[k] / nl;
        const double sum_r = pre_sum[n] - pre_sum[k];
        const double sse_r = (pre_sq[n] - pre_sq[k]) - sum_r * sum_r / nr;
        const double total = sse_l + sse_r;
        if (total < best.children_sse) {
            best.found = true;
            best.feature = feature;
            best.threshold = (lo + hi) / 2.0;
            best.children_sse = total;
        }
    }
}

// One uniform threshold inside the feature's node range; the best of the
// (up to three) candidates wins by SSE, earlier feature on a tie.
void random_feature_split(const std::vector<std::array<double, 3>>& xs,
                          const std::vector<double>& ys, const std::vector<int>& idx, int feature,
                          Rng& rng, Split& best) {
    double lo = xs[idx[0]][feature];
    double hi = lo;
    for (int i : idx) {
        lo = std::min(lo, xs[i][feature]);
        hi = std::max(hi, xs[i][feature]);
    }
    if (lo == hi) return;
    const double threshold = lo + rng.next_double() * (hi - lo);

    double sum_l = 0.0;
    double sq_l = 0.0;
    double sum_r = 0.0;
    double sq_r = 0.0;
    double nl = 0.0;
    double nr = 0.0;
    for (int i : idx) {
        const double y = ys[i];
        if (xs[i][feature] <= threshold) {
            sum_l += y;
            sq_l += y * y;
            nl += 1.0;
        } else {
            sum_r += y;
            sq_r += y * y;
            nr += 1.0;
        }
    }
    const double total = (sq_l - sum_l * sum_l / nl) + (sq_r - sum_r * sum_r / nr);
    if (total < best.children_sse) {
        best.found = true;
        best.feature = feature;
        best.threshold = threshold;
        best.children_sse = total;
    }
}

} // namespace

double Tree::predict(const std::array<double, 3>& x) const {
    int at = 0;
    while (nodes[at].feature >= 0) {
        const TreeNode& node = nodes[at];
        at = (x[node.feature] <= node.threshold) ? node.left : node.right;
    }
    return nodes[at].value;
}

Tree fit_tree(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
              const std::vector<int>& sample_idx, const TreeParams& params, Rng* rng) {
    if (sample_idx.empty()) fail(errc::insufficient_data, "cannot fit a tree on zero samples");
    if (params.random_thresholds && rng == nullptr) {
        fail(errc::invalid_argument, "random-threshold trees need a generator");
    }

    Tree tree;
    struct Work {
        std::vector<int> idx;
        int depth;
        int slot;
    };
    tree.nodes.emplace_back();
    std::vector<Work> stack;
    stack.push_back({sample_idx, 0, 0});

    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        TreeNode& node = tree.nodes[work.slot];
        node.value = subset_mean(ys, work.idx);

        const bool depth_capped = params.max_depth >= 0 && work.depth >= params.max_depth;
        if (depth_capped || work.idx.size() < 2 * static_cast<std::size_t>(params.min_samples_leaf) ||
            is_pure(ys, work.idx)) {
            continue;
        }

        Split best;
        if (params.random_thresholds) {
            for (int f = 0; f < kFeatureCount; ++f) {
                random_feature_split(xs, ys, work.idx, f, *rng, best);
            }
        } else {
            double node_sum = 0.0;
            double node_sq = 0.0;
            for (int i : work.idx) {
                node_sum += ys[i];
                node_sq += ys[i] * ys[i];
            }
            const double node_sse =
                node_sq - node_sum * node_sum / static_cast<double>(work.idx.size());
            std::vector<int> order = work.idx;
            for (int f = 0; f < kFeatureCount; ++f) {
                scan_feature(xs, ys, order, f, params.min_samples_leaf, best);
            }
            if (best.found && !(best.children_sse < node_sse)) best.found = false;
        }
        if (!best.found) continue;

        std::vector<int> left_idx;
        std::vector<int> right_idx;
        for (int i : work.idx) {
            (xs[i][best.feature] <= best.threshold ? left_idx : right_idx).push_back(i);
        }
        if (left_idx.empty() || right_idx.empty()) continue;

        const int left_slot = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const int right_slot = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        TreeNode& filled = tree.nodes[work.slot]; // emplace may have reallocated
        filled.feature = best.feature;
        filled.threshold = best.threshold;
        filled.left = left_slot;
        filled.right = right_slot;

        stack.push_back({std::move(right_idx), work.depth + 1, right_slot});
        stack.push_back({std::move(left_idx), work.depth + 1, left_slot});
    }
    return tree;
}

} // namespace lvef

#pragma once

#include <array>
#include <vector>

namespace lvef {

// Per-feature z-score transform. Constant features keep scale 1 so the
// transform stays well defined (they standardize to zero).
struct Standardizer {
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    std::array<double, 3> scale{1.0, 1.0, 1.0};

    std::array<double, 3> apply(const std::array<double, 3>& x) const;
};

Standardizer fit_standardizer(const std::vector<std::array<double, 3>>& xs);

struct LinearModel {
    std::array<double, 3> coef{0.0, 0.0, 0.0};
    double intercept = 0.0;

    double predict(const std::array<double, 3>& x) const;
};

// Least squares via the normal equations on centered data; the intercept is
// never penalized. lambda = 0 requires a full-rank design.
LinearModel fit_ols(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys);
LinearModel fit_ridge(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                      double lambda);

struct LassoFit {
    LinearModel model;
    double lambda = 0.0;
    // Value of 0.5*||y - Xb||^2 + lambda*||b||_1 after each full sweep.
    std::vector<double> objective_trace;
};

// Cyclic coordinate descent; stops when the largest coefficient update in a
// sweep drops below 1e-6, or after 10,000 sweeps.
LassoFit fit_lasso(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                   double lambda);

// Exact non-negative least squares for a 3-column design (no intercept),
// by scanning all column subsets; rank-deficient subsets are skipped since
// the optimum is always attainable on independent columns.
std::array<double, 3> nnls3(const std::vector<std::array<double, 3>>& columns,
                            const std::vector<double>& y);

} // namespace lvef

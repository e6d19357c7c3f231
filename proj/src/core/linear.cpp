#include "core/linear.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace lvef {

namespace {

constexpr int kFeatures = 3;

void check_shapes(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        fail(errc::length_mismatch, std::to_string(xs.size()) + " feature rows vs " +
                                        std::to_string(ys.size()) + " targets");
    }
    if (xs.empty()) fail(errc::insufficient_data, "no samples");
}

struct Centered {
    Eigen::MatrixXd x;            // column-centered design
    Eigen::VectorXd y;            // centered target
    Eigen::Vector3d feature_mean;
    double target_mean = 0.0;
};

Centered center(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    Centered c;
    c.x.resize(n, kFeatures);
    c.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int f = 0; f < kFeatures; ++f) c.x(i, f) = xs[i][f];
        c.y(i) = ys[i];
    }
    c.feature_mean = c.x.colwise().mean();
    c.target_mean = c.y.mean();
    c.x.rowwise() -= c.feature_mean.transpose();
    c.y.array() -= c.target_mean;
    return c;
}

LinearModel assemble(const Eigen::Vector3d& slopes, const Centered& c) {
    LinearModel model;
    for (int f = 0; f < kFeatures; ++f) model.coef[f] = slopes(f);
    model.intercept = c.target_mean - slopes.dot(c.feature_mean);
    return model;
}

} // namespace

std::array<double, 3> Standardizer::apply(const std::array<double, 3>& x) const {
    return {(x[0] - mean[0]) / scale[0], (x[1] - mean[1]) / scale[1],
            (x[2] - mean[2]) / scale[2]};
}

Standardizer fit_standardizer(const std::vector<std::array<double, 3>>& xs) {
    if (xs.empty()) fail(errc::insufficient_data, "no samples to standardize");
    Standardizer s;
    const double n = static_cast<double>(xs.size());
    for (int f = 0; f < kFeatures; ++f) {
        double mean = 0.0;
        for (const auto& x : xs) mean += x[f];
        mean /= n;
        double var = 0.0;
        for (const auto& x : xs) var += (x[f] - mean) * (x[f] - mean);
        var /= n;
        s.mean[f] = mean;
        s.scale[f] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return s;
}

double LinearModel::predict(const std::array<double, 3>& x) const {
    return intercept + coef[0] * x[0] + coef[1] * x[1] + coef[2] * x[2];
}

LinearModel fit_ols(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys) {
    return fit_ridge(xs, ys, 0.0);
}

LinearModel fit_ridge(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                      double lambda) {
    check_shapes(xs, ys);
    if (lambda < 0.0) fail(errc::invalid_argument, "ridge penalty must be non-negative");
    const Centered c = center(xs, ys);

    Eigen::Vector3d slopes;
    if (lambda == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.x);
        if (qr.rank() < kFeatures) {
            fail(errc::singular_design, "rank " + std::to_string(qr.rank()) +
                                            " design; unpenalized least squares needs rank 3");
        }
        slopes = qr.solve(c.y);
    } else {
        const Eigen::Matrix3d gram =
            c.x.transpose() * c.x + lambda * Eigen::Matrix3d::Identity();
        slopes = gram.ldlt().solve(c.x.transpose() * c.y);
    }
    return assemble(slopes, c);
}

LassoFit fit_lasso(const std::vector<std::array<double, 3>>& xs, const std::vector<double>& ys,
                   double lambda) {
    check_shapes(xs, ys);
    if (lambda < 0.0) fail(errc::invalid_argument, "lasso penalty must be non-negative");
    const Centered c = center(xs, ys);
    const auto n = c.x.rows();

    Eigen::Vector3d norms; // column sum of squares
    for (int f = 0; f < kFeatures; ++f) norms(f) = c.x.col(f).squaredNorm();

    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    Eigen::VectorXd residual = c.y;

    // Objective recomputed from beta each sweep, in extended precision, so
    // the recorded trace orders correctly even once updates reach 1e-6.
    auto objective = [&]() {
        long double sq = 0.0L;
        for (Eigen::Index i = 0; i < n; ++i) {
            long double r = c.y(i);
            for (int f = 0; f < kFeatures; ++f) r -= static_cast<long double>(beta(f)) * c.x(i, f);
            sq += r * r;
        }
        long double l1 = 0.0L;
        for (int f = 0; f < kFeatures; ++f) l1 += std::abs(static_cast<long double>(beta(f)));
        return static_cast<double>(0.5L * sq + static_cast<long double>(lambda) * l1);
    };

    LassoFit fit;
    fit.lambda = lambda;
    constexpr int kMaxSweeps = 10000;
    constexpr double kTol = 1e-6;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_update = 0.0;
        for (int f = 0; f < kFeatures; ++f) {
            if (norms(f) == 0.0) continue;
            const double old = beta(f);
            const double rho = c.x.col(f).dot(residual) + norms(f) * old;
            double next = 0.0;
            if (rho > lambda) {
                next = (rho - lambda) / norms(f);
            } else if (rho < -lambda) {
                next = (rho + lambda) / norms(f);
            }
            const double delta = next - old;
            if (delta != 0.0) {
                residual -= delta * c.x.col(f);
                beta(f) = next;
            }
            max_update = std::max(max_update, std::abs(delta));
        }
        fit.objective_trace.push_back(objective());
        if (max_update < kTol) break;
    }
    fit.model = assemble(beta, c);
    return fit;
}

std::array<double, 3> nnls3(const std::vector<std::array<double, 3>>& columns,
                            const std::vector<double>& y) {
    check_shapes(columns, y);
    const auto n = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd a(n, kFeatures);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int f = 0; f < kFeatures; ++f) a(i, f) = columns[i][f];
        target(i) = y[i];
    }

    std::array<double, 3> best{0.0, 0.0, 0.0};
    double best_sse = target.squaredNorm(); // all-zero weights
    for (int mask = 1; mask < (1 << kFeatures); ++mask) {
        std::vector<int> cols;
        for (int f = 0; f < kFeatures; ++f) {
            if (mask & (1 << f)) cols.push_back(f);
        }
        Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
        if (qr.rank() < static_cast<Eigen::Index>(cols.size())) continue;
        const Eigen::VectorXd w = qr.solve(target);
        if ((w.array() < 0.0).any()) continue;
        const double sse = (target - sub * w).squaredNorm();
        if (sse < best_sse) {
            best_sse = sse;
            best = {0.0, 0.0, 0.0};
            for (std::size_t j = 0; j < cols.size(); ++j) best[cols[j]] = w(static_cast<Eigen::Index>(j));
        }
    }
    return best;
}

} // namespace lvef

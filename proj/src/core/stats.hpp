#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace lvef::stats {

struct PearsonResult {
    double r;
    double p; // two-sided, Student t with n-2 df
};

// Product-moment correlation with its two-sided significance.
// Requires n >= 3 and nonzero variance in both inputs.
PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Coefficient of determination, 1 - SS_res / SS_tot.
// Zero-variance targets: 1.0 when all residuals vanish, errc::flat_target otherwise.
double r2_score(const std::vector<double>& y_true, const std::vector<double>& y_pred);

struct TTestResult {
    double t;
    double p; // two-sided, n-1 df
};

// Paired two-sided t-test on a - b. Identical lists give t = 0, p = 1;
// a constant nonzero difference has no spread and is rejected.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct RocPoint {
    double fpr;
    double tpr;
};

struct RocResult {
    std::vector<RocPoint> points; // from (0,0) to (1,1), one step per unique score
    double auc;                   // trapezoid; equals Mann-Whitney with 0.5 tie credit
};

RocResult roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
};

Confusion confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth);

enum class Statistic { MEAN, PEARSON_R, AUC, ACCURACY };

// Paired data for PEARSON_R (x,y), AUC (score,label) and ACCURACY (pred,truth);
// MEAN only looks at `a`.
struct BootstrapInput {
    std::vector<double> a;
    std::vector<double> b;
};

struct Interval {
    double lo;
    double hi;
};

// Percentile bootstrap: resample with replacement n_resamples times, take the
// 2.5th/97.5th percentiles of the statistic. Resample i draws its indices from
// substream (seed, i). AUC resamples missing a class are redrawn up to 10 times.
Interval bootstrap_ci(const BootstrapInput& data, Statistic statistic,
                      int n_resamples = 100, std::uint64_t seed = 42);

// Linear interpolation between order statistics; `sorted` must be ascending,
// p in [0, 100]. Shared by the bootstrap and the area percentile baseline.
double percentile(const std::vector<double>& sorted, double p);

// Regularized incomplete beta I_x(a,b) by continued fraction, relative
// error ~1e-12. Used for Student-t tail probabilities.
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with df degrees of freedom.
double t_two_sided_p(double t, double df);

} // namespace lvef::stats

#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace lvef::stats {

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) fail(errc::too_few_samples, "percentile of empty list");
    if (!(p >= 0.0 && p <= 100.0))
        fail(errc::invalid_argument, "percentile: p outside [0, 100]");
    if (sorted.size() == 1) return sorted[0];
    double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
    if (rank <= 0.0) return sorted.front();
    if (rank >= static_cast<double>(sorted.size() - 1)) return sorted.back();
    std::size_t lo = static_cast<std::size_t>(rank);
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Lentz-style continued fraction for the incomplete beta (as in Numerical
// Recipes betacf), converged to ~1e-13.
static double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-14;
    constexpr double fpmin = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        fail(errc::length_mismatch, "pearson: input lengths differ");
    std::size_t n = xs.size();
    if (n < 3) fail(errc::too_few_samples, "pearson needs n >= 3");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        fail(errc::zero_variance, "pearson: constant input");

    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    double df = static_cast<double>(n - 2);
    double p;
    if (1.0 - r * r < 1e-15) {
        p = 0.0;
    } else {
        double t = r * std::sqrt(df / (1.0 - r * r));
        p = t_two_sided_p(t, df);
    }
    return {r, p};
}

double r2_score(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size())
        fail(errc::length_mismatch, "r2_score: input lengths differ");
    if (y_true.size() < 2) fail(errc::too_few_samples, "r2_score needs n >= 2");

    double mean = 0.0;
    for (double y : y_true) mean += y;
    mean /= static_cast<double>(y_true.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        double r = y_true[i] - y_pred[i];
        double d = y_true[i] - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) {
        if (ss_res == 0.0) return 1.0;
        fail(errc::flat_target, "r2_score: zero-variance target with nonzero residuals");
    }
    return 1.0 - ss_res / ss_tot;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        fail(errc::length_mismatch, "paired_t_test: input lengths differ");
    std::size_t n = a.size();
    if (n < 2) fail(errc::too_few_samples, "paired_t_test needs n >= 2");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        if (mean == 0.0) return {0.0, 1.0};
        fail(errc::degenerate_differences, "paired_t_test: constant nonzero differences");
    }
    double t = mean / (sd / std::sqrt(static_cast<double>(n)));
    return {t, t_two_sided_p(t, static_cast<double>(n - 1))};
}

RocResult roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        fail(errc::length_mismatch, "roc_auc: input lengths differ");
    long pos = 0, neg = 0;
    for (int y : labels) (y ? pos : neg)++;
    if (pos == 0 || neg == 0)
        fail(errc::single_class, "roc_auc: both classes required");

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (scores[i] != scores[j]) return scores[i] > scores[j];
        return i < j;
    });

    RocResult out;
    out.points.push_back({0.0, 0.0});
    double auc = 0.0;
    long tp = 0, fp = 0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        double s = scores[order[i]];
        // all samples tied at this score move together
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] ? tp : fp)++;
            ++i;
        }
        double tpr = static_cast<double>(tp) / static_cast<double>(pos);
        double fpr = static_cast<double>(fp) / static_cast<double>(neg);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        out.points.push_back({fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    out.auc = auc;
    return out;
}

Confusion confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        fail(errc::length_mismatch, "confusion_matrix: input lengths differ");
    Confusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i]) {
            (pred[i] ? c.tp : c.fn)++;
        } else {
            (pred[i] ? c.fp : c.tn)++;
        }
    }
    if (!pred.empty())
        c.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(pred.size());
    return c;
}

static double evaluate_statistic(Statistic statistic, const std::vector<double>& a,
                                 const std::vector<double>& b) {
    switch (statistic) {
        case Statistic::MEAN: {
            double m = 0.0;
            for (double v : a) m += v;
            return m / static_cast<double>(a.size());
        }
        case Statistic::PEARSON_R:
            return pearson(a, b).r;
        case Statistic::AUC: {
            std::vector<int> labels(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) labels[i] = b[i] != 0.0;
            return roc_auc(a, labels).auc;
        }
        case Statistic::ACCURACY: {
            std::vector<int> p(a.size()), t(b.size());
            for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] != 0.0;
            for (std::size_t i = 0; i < b.size(); ++i) t[i] = b[i] != 0.0;
            return confusion_matrix(p, t).accuracy;
        }
    }
    fail(errc::invalid_argument, "unknown statistic");
}

Interval bootstrap_ci(const BootstrapInput& data, Statistic statistic,
                      int n_resamples, std::uint64_t seed) {
    std::size_t n = data.a.size();
    bool paired = statistic != Statistic::MEAN;
    if (paired && data.b.size() != n)
        fail(errc::length_mismatch, "bootstrap_ci: paired inputs must match");
    if (n < 2) fail(errc::insufficient_data, "bootstrap_ci needs >= 2 data points");
    if (n_resamples < 1) fail(errc::invalid_argument, "bootstrap_ci: n_resamples < 1");

    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(n_resamples));
    std::vector<double> ra(n), rb(paired ? n : 0);
    for (int i = 0; i < n_resamples; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        int attempts = 0;
        while (true) {
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t k = static_cast<std::size_t>(rng.next_index(n));
                ra[j] = data.a[k];
                if (paired) rb[j] = data.b[k];
            }
            if (statistic == Statistic::AUC) {
                bool has_pos = false, has_neg = false;
                for (double v : rb) (v != 0.0 ? has_pos : has_neg) = true;
                if (!has_pos || !has_neg) {
                    if (++attempts >= 10)
                        fail(errc::single_class_resample,
                             "bootstrap_ci: resample " + std::to_string(i) +
                                 " kept missing a class after 10 attempts");
                    continue;
                }
            }
            if (statistic == Statistic::PEARSON_R) {
                // A resample that repeats one pair n times has no correlation
                // to speak of; treat it like the missing-class case above.
                auto constant = [](const std::vector<double>& v) {
                    return std::all_of(v.begin(), v.end(),
                                       [&](double x) { return x == v.front(); });
                };
                if (constant(ra) || constant(rb)) {
                    if (++attempts >= 10)
                        fail(errc::zero_variance,
                             "bootstrap_ci: resample " + std::to_string(i) +
                                 " stayed constant after 10 attempts");
                    continue;
                }
            }
            break;
        }
        stats.push_back(evaluate_statistic(statistic, ra, paired ? rb : data.b));
    }
    std::sort(stats.begin(), stats.end());
    return {percentile(stats, 2.5), percentile(stats, 97.5)};
}

} // namespace lvef::stats

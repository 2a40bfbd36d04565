#pragma once

// Cohort-level statistics: Welch's t-test with a Student-t tail computed from
// the regularized incomplete beta function, threshold classification of
// models by a signature statistic, and group fairness metrics.

#include <nntopo/analytics.hpp>
#include <nntopo/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nntopo {

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2); y = 1 - x is passed separately to avoid
// cancellation near x = 1.
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw numerical_error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) given x and y = 1 - x.
inline double regularized_incomplete_beta(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) throw numerical_error("incomplete beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, y) / b;
}

// P(T > t) for Student's t with dof degrees of freedom.
inline double student_t_sf(double t, double dof) {
    if (!(dof > 0.0)) throw numerical_error("student_t_sf: dof must be positive");
    if (std::isnan(t)) throw numerical_error("student_t_sf: t is NaN");
    if (t == 0.0) return 0.5;
    const double t2 = t * t;
    const double x = dof / (dof + t2);
    const double y = t2 / (dof + t2);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x, y);
    return t > 0.0 ? tail : 1.0 - tail;
}

enum class Statistic { avg_pd1, topk_pd1 };

inline std::string_view to_string(Statistic s) { return s == Statistic::avg_pd1 ? "avg_pd1" : "topk_pd1"; }

inline Statistic parse_statistic(std::string_view name) {
    if (name == "avg_pd1") return Statistic::avg_pd1;
    if (name == "topk_pd1") return Statistic::topk_pd1;
    throw usage_error("unknown statistic '" + std::string(name) + "' (expected avg_pd1 or topk_pd1)");
}

struct CohortComparison {
    double t_statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    double mean_a = 0.0, mean_b = 0.0;
    double std_a = 0.0, std_b = 0.0;
    std::optional<Statistic> statistic;
};

namespace detail {

struct MeanVar {
    double mean;
    double var;  // sample variance, n - 1 denominator
};

inline MeanVar mean_var(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return {m, ss / static_cast<double>(xs.size() - 1)};
}

}  // namespace detail

// Two-sided Welch (unequal variance) t-test of mean(xs) == mean(ys).
inline CohortComparison welch_t_test(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2 || ys.size() < 2) throw data_error("welch_t_test: each side needs at least 2 samples");
    for (double v : xs) {
        if (!std::isfinite(v)) throw data_error("welch_t_test: non-finite sample");
    }
    for (double v : ys) {
        if (!std::isfinite(v)) throw data_error("welch_t_test: non-finite sample");
    }
    const auto x = detail::mean_var(xs);
    const auto y = detail::mean_var(ys);
    const double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());

    CohortComparison out;
    out.mean_a = x.mean;
    out.mean_b = y.mean;
    out.std_a = std::sqrt(x.var);
    out.std_b = std::sqrt(y.var);

    const double vx = x.var / nx, vy = y.var / ny;
    const double se2 = vx + vy;
    if (se2 == 0.0) {
        if (x.mean != y.mean) throw numerical_error("degenerate zero-variance cohorts");
        out.t_statistic = 0.0;
        out.dof = nx + ny - 2.0;
        out.p_value = 1.0;
        return out;
    }
    out.t_statistic = (x.mean - y.mean) / std::sqrt(se2);
    out.dof = se2 * se2 / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0));
    const double p = 2.0 * student_t_sf(std::fabs(out.t_statistic), out.dof);
    // p is reported in (0, 1]; an underflowed tail is pinned to the smallest normal double.
    out.p_value = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
    return out;
}

struct Cohort {
    std::string label;
    std::vector<TopologySignature> signatures;
};

inline void validate(const Cohort& c) {
    if (c.signatures.empty()) throw data_error("cohort '" + c.label + "' is empty");
    for (const auto& s : c.signatures) {
        if (s.k != c.signatures.front().k) {
            throw data_error("cohort '" + c.label + "': signatures use different k (" +
                             std::to_string(c.signatures.front().k) + " vs " + std::to_string(s.k) + ")");
        }
    }
}

inline std::vector<double> statistic_values(const Cohort& c, Statistic stat) {
    std::vector<double> out;
    for (const auto& s : c.signatures) out.push_back(stat == Statistic::avg_pd1 ? s.avg_pd1 : s.topk_pd1);
    return out;
}

inline CohortComparison compare_cohorts(const Cohort& a, const Cohort& b, Statistic stat) {
    validate(a);
    validate(b);
    auto cmp = welch_t_test(statistic_values(a, stat), statistic_values(b, stat));
    cmp.statistic = stat;
    return cmp;
}

struct ThresholdFit {
    double threshold = 0.0;
    double balanced_accuracy = 0.5;
};

// Fraction-weighted accuracy of "x > threshold means cohort b".
inline double balanced_accuracy(const std::vector<double>& a, const std::vector<double>& b, double threshold) {
    const auto a_ok = std::count_if(a.begin(), a.end(), [&](double x) { return !(x > threshold); });
    const auto b_ok = std::count_if(b.begin(), b.end(), [&](double x) { return x > threshold; });
    return 0.5 * (static_cast<double>(a_ok) / static_cast<double>(a.size()) +
                  static_cast<double>(b_ok) / static_cast<double>(b.size()));
}

// Cohort b is the one expected to score higher. Candidates are midpoints
// between consecutive distinct pooled values; the lowest candidate with the
// best balanced accuracy wins. If none beats chance, the pooled median is
// returned.
inline ThresholdFit fit_threshold(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw data_error("fit_threshold: both cohorts must be non-empty");
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());

    ThresholdFit best{0.0, -1.0};
    for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
        if (pooled[i] == pooled[i + 1]) continue;
        const double mid = pooled[i] + (pooled[i + 1] - pooled[i]) / 2.0;
        const double acc = balanced_accuracy(a, b, mid);
        if (acc > best.balanced_accuracy) best = {mid, acc};
    }
    if (best.balanced_accuracy <= 0.5) {
        const std::size_t n = pooled.size();
        const double median = n % 2 ? pooled[n / 2] : pooled[n / 2 - 1] + (pooled[n / 2] - pooled[n / 2 - 1]) / 2.0;
        return {median, balanced_accuracy(a, b, median)};
    }
    return best;
}

inline ThresholdFit fit_threshold(const Cohort& a, const Cohort& b, Statistic stat) {
    validate(a);
    validate(b);
    return fit_threshold(statistic_values(a, stat), statistic_values(b, stat));
}

struct FairnessReport {
    double unbiased_acc = 0.0;
    double worst_group_acc = 0.0;
    double unbiased_acc_std = 0.0;
    double eo_disparity = 0.0;
    double average_odds = 0.0;
    std::map<std::string, double> group_accs;  // "<group>/y=<label>"
    std::map<std::string, double> tpr;         // per sensitive group
    std::map<std::string, double> fpr;
};

inline std::string subgroup_key(const std::string& group, int label) { return group + "/y=" + std::to_string(label); }

// Subgroups are (sensitive group x true label) cells. Accuracy of a cell is
// the TPR (label 1) or TNR (label 0) of its sensitive group. Odds gaps are
// maximised over all pairs of sensitive groups.
inline FairnessReport group_fairness_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                             const std::vector<std::string>& sensitive) {
    if (y_true.size() != y_pred.size() || y_true.size() != sensitive.size()) {
        throw data_error("fairness: length mismatch between y_true, y_pred and group");
    }
    if (y_true.empty()) throw data_error("fairness: no samples");

    struct Tally {
        std::size_t pos = 0, true_pos = 0, neg = 0, false_pos = 0;
    };
    std::map<std::string, Tally> tallies;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1)) {
            throw data_error("fairness: labels must be 0 or 1 (row " + std::to_string(i + 1) + ")");
        }
        auto& t = tallies[sensitive[i]];
        if (y_true[i] == 1) {
            ++t.pos;
            t.true_pos += static_cast<std::size_t>(y_pred[i] == 1);
        } else {
            ++t.neg;
            t.false_pos += static_cast<std::size_t>(y_pred[i] == 1);
        }
    }
    if (tallies.size() < 2) throw data_error("fairness: need at least 2 sensitive groups");

    FairnessReport report;
    std::vector<double> accs;
    for (const auto& [group, t] : tallies) {
        if (t.pos == 0 || t.neg == 0) {
            throw data_error("fairness: empty subgroup '" + subgroup_key(group, t.pos == 0 ? 1 : 0) + "'");
        }
        const double tpr = static_cast<double>(t.true_pos) / static_cast<double>(t.pos);
        const double fpr = static_cast<double>(t.false_pos) / static_cast<double>(t.neg);
        const double tnr = static_cast<double>(t.neg - t.false_pos) / static_cast<double>(t.neg);
        report.tpr[group] = tpr;
        report.fpr[group] = fpr;
        report.group_accs[subgroup_key(group, 0)] = tnr;
        report.group_accs[subgroup_key(group, 1)] = tpr;
    }
    for (const auto& [key, acc] : report.group_accs) accs.push_back(acc);

    double sum = 0.0;
    for (double a : accs) sum += a;
    report.worst_group_acc = *std::min_element(accs.begin(), accs.end());
    // Rounding in the sum must not push the mean below its minimum term.
    report.unbiased_acc = std::max(sum / static_cast<double>(accs.size()), report.worst_group_acc);
    double ss = 0.0;
    for (double a : accs) ss += (a - report.unbiased_acc) * (a - report.unbiased_acc);
    report.unbiased_acc_std = std::sqrt(ss / static_cast<double>(accs.size()));

    for (auto g1 = report.tpr.begin(); g1 != report.tpr.end(); ++g1) {
        for (auto g2 = std::next(g1); g2 != report.tpr.end(); ++g2) {
            const double dtpr = std::fabs(g1->second - g2->second);
            const double dfpr = std::fabs(report.fpr[g1->first] - report.fpr[g2->first]);
            report.eo_disparity = std::max(report.eo_disparity, std::max(dtpr, dfpr));
            report.average_odds = std::max(report.average_odds, (dtpr + dfpr) / 2.0);
        }
    }
    return report;
}

}  // namespace nntopo

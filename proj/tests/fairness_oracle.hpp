#pragma once

// Direct confusion-matrix tally for the group fairness metrics. Structured
// differently from the library on purpose: counts live in a 2x2 table per
// group and subgroup accuracy is correct/total per (group, label) cell.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace nntopo::oracle {

struct FairnessInstance {
    std::vector<int> y_true, y_pred;
    std::vector<std::string> group;
};

struct FairnessOracle {
    std::map<std::string, double> group_accs;
    double unbiased_acc, worst_group_acc, unbiased_acc_std, eo_disparity, average_odds;
};

// Two groups with TPR 0.9 / 0.5 and FPR 0.1 / 0.2, ten samples per cell.
inline FairnessInstance tpr_fpr_fixture() {
    FairnessInstance f;
    const auto add = [&](const std::string& g, int y, int positives_predicted) {
        for (int i = 0; i < 10; ++i) {
            f.y_true.push_back(y);
            f.y_pred.push_back(i < positives_predicted ? 1 : 0);
            f.group.push_back(g);
        }
    };
    add("g1", 1, 9);
    add("g1", 0, 1);
    add("g2", 1, 5);
    add("g2", 0, 2);
    return f;
}

inline FairnessInstance random_fairness_instance(std::mt19937_64& gen, std::size_t n, int n_groups) {
    FairnessInstance f;
    std::uniform_int_distribution<int> bit(0, 1), grp(0, n_groups - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Guarantee every (group, label) cell is populated.
    for (int g = 0; g < n_groups; ++g) {
        for (int y = 0; y < 2; ++y) {
            f.y_true.push_back(y);
            f.y_pred.push_back(bit(gen));
            f.group.push_back("G" + std::to_string(g));
        }
    }
    while (f.y_true.size() < n) {
        const int g = grp(gen), y = bit(gen);
        const double flip = 0.1 + 0.15 * g;
        f.y_true.push_back(y);
        f.y_pred.push_back(unif(gen) < flip ? 1 - y : y);
        f.group.push_back("G" + std::to_string(g));
    }
    return f;
}

inline FairnessOracle fairness_oracle(const FairnessInstance& f) {
    std::map<std::string, std::array<std::array<int, 2>, 2>> cm;  // [true][pred]
    for (std::size_t i = 0; i < f.y_true.size(); ++i) ++cm[f.group[i]][f.y_true[i]][f.y_pred[i]];

    FairnessOracle o{};
    std::map<std::string, double> tpr, fpr;
    for (const auto& [g, t] : cm) {
        const int pos = t[1][0] + t[1][1], neg = t[0][0] + t[0][1];
        o.group_accs[g + "/y=1"] = static_cast<double>(t[1][1]) / pos;
        o.group_accs[g + "/y=0"] = static_cast<double>(t[0][0]) / neg;
        tpr[g] = static_cast<double>(t[1][1]) / pos;
        fpr[g] = static_cast<double>(t[0][1]) / neg;
    }
    std::vector<double> accs;
    for (const auto& [k, v] : o.group_accs) accs.push_back(v);
    double sum = 0.0;
    for (double a : accs) sum += a;
    const double mean = sum / accs.size();
    o.unbiased_acc = mean;
    o.worst_group_acc = *std::min_element(accs.begin(), accs.end());
    double ss = 0.0;
    for (double a : accs) ss += (a - mean) * (a - mean);
    o.unbiased_acc_std = std::sqrt(ss / accs.size());
    o.eo_disparity = 0.0;
    o.average_odds = 0.0;
    for (const auto& [g1, t1] : tpr) {
        for (const auto& [g2, t2] : tpr) {
            const double dt = std::fabs(t1 - t2), df = std::fabs(fpr[g1] - fpr[g2]);
            o.eo_disparity = std::max(o.eo_disparity, std::max(dt, df));
            o.average_odds = std::max(o.average_odds, (dt + df) / 2.0);
        }
    }
    return o;
}

}  // namespace nntopo::oracle

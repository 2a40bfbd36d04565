#pragma once

// Scalar summaries of persistence diagrams and the order-1 Wasserstein
// distance between them.

#include <nntopo/detail/io.hpp>
#include <nntopo/error.hpp>
#include <nntopo/persistence.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace nntopo {

namespace detail {

// Finite, positive persistences of one dimension.
inline std::vector<double> persistences(const PersistenceDiagram& diag, int dim) {
    std::vector<double> out;
    for (const auto& p : diag.pairs) {
        if (p.dim == dim && !p.essential() && p.death > p.birth) out.push_back(p.persistence());
    }
    return out;
}

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace detail

inline double avg_persistence(const PersistenceDiagram& diag, int dim) {
    auto p = detail::persistences(diag, dim);
    std::sort(p.begin(), p.end(), std::greater<>());  // summation order independent of pair order
    return detail::mean(p);
}

// Mean of the min(k, n) largest finite persistences; 0 for an empty diagram.
inline double topk_mean_persistence(const PersistenceDiagram& diag, int dim, std::size_t k) {
    if (k == 0) throw usage_error("topk_mean_persistence: k must be positive");
    auto p = detail::persistences(diag, dim);
    std::sort(p.begin(), p.end(), std::greater<>());
    if (p.size() > k) p.resize(k);
    return detail::mean(p);
}

// Minimum-cost perfect assignment on a square cost matrix (row-major), via
// the shortest augmenting path form of the Hungarian method. Returns, for each
// row, its assigned column.
inline std::vector<std::size_t> hungarian_assignment(const std::vector<double>& cost, std::size_t n) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; column 0 is a virtual source.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[col0] = true;
            const std::size_t r = match[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = cost[(r - 1) * n + (c - 1)] - u[r] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t c = 1; c <= n; ++c) assignment[match[c] - 1] = c - 1;
    return assignment;
}

// Distance from (birth, death) to the diagonal under the Euclidean metric.
inline double diagonal_distance(const PersistencePair& p) { return (p.death - p.birth) / std::numbers::sqrt2; }

inline double pair_distance(const PersistencePair& a, const PersistencePair& b) {
    return std::hypot(a.birth - b.birth, a.death - b.death);
}

// Order-1 Wasserstein distance between the finite pairs of one dimension,
// Euclidean ground metric, unmatched points charged their diagonal distance.
inline double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
    std::vector<PersistencePair> pa, pb;
    for (const auto& p : a.pairs) {
        if (p.dim == dim && !p.essential()) pa.push_back(p);
    }
    for (const auto& p : b.pairs) {
        if (p.dim == dim && !p.essential()) pb.push_back(p);
    }
    const std::size_t na = pa.size(), nb = pb.size(), n = na + nb;
    if (n == 0) return 0.0;

    // Rows: points of a, then diagonal slots for b. Columns: points of b, then
    // diagonal slots for a. A point may only use its own diagonal slot.
    double forbidden = 1.0;
    for (const auto& p : pa) forbidden += diagonal_distance(p);
    for (const auto& p : pb) forbidden += diagonal_distance(p);
    forbidden *= 2.0;
    std::vector<double> cost(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double& x = cost[r * n + c];
            if (r < na && c < nb) {
                x = pair_distance(pa[r], pb[c]);
            } else if (r < na) {
                x = (c - nb == r) ? diagonal_distance(pa[r]) : forbidden;
            } else if (c < nb) {
                x = (r - na == c) ? diagonal_distance(pb[c]) : forbidden;
            } else {
                x = 0.0;
            }
        }
    }
    const auto assignment = hungarian_assignment(cost, n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) total += cost[r * n + assignment[r]];
    return total;
}

struct TopologySignature {
    std::string model_id;
    std::size_t n_pd1 = 0;
    double avg_pd1 = 0.0;
    double topk_pd1 = 0.0;
    std::size_t k = 5;

    friend bool operator==(const TopologySignature&, const TopologySignature&) = default;
};

inline TopologySignature signature(const PersistenceDiagram& diag, std::size_t k, std::string model_id) {
    return {std::move(model_id), detail::persistences(diag, 1).size(), avg_persistence(diag, 1),
            topk_mean_persistence(diag, 1, k), k};
}

inline constexpr std::string_view kSignatureHeader = "model_id,n_pd1,avg_pd1,topk_pd1,k";

inline std::string signature_to_csv_row(const TopologySignature& s) {
    return s.model_id + ',' + std::to_string(s.n_pd1) + ',' + detail::format_double(s.avg_pd1) + ',' +
           detail::format_double(s.topk_pd1) + ',' + std::to_string(s.k) + '\n';
}

inline std::string signatures_to_csv(const std::vector<TopologySignature>& sigs) {
    std::string out(kSignatureHeader);
    out += '\n';
    for (const auto& s : sigs) out += signature_to_csv_row(s);
    return out;
}

// Reads signature rows; columns are located by header name, so extra columns
// are tolerated.
inline std::vector<TopologySignature> parse_signatures_csv(std::string_view text) {
    const auto rows = detail::lines(text);
    if (rows.empty()) throw data_error("signature CSV: empty input");
    const auto header = detail::split(rows.front().second, ',');
    const auto column = [&](std::string_view name) -> std::size_t {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (detail::trim(header[c]) == name) return c;
        }
        throw data_error("signature CSV: missing column '" + std::string(name) + "'");
    };
    const std::size_t c_id = column("model_id"), c_n = column("n_pd1"), c_avg = column("avg_pd1"),
                      c_topk = column("topk_pd1"), c_k = column("k");
    std::vector<TopologySignature> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto cells = detail::split(rows[r].second, ',');
        const auto where = " on line " + std::to_string(rows[r].first);
        if (cells.size() != header.size()) throw data_error("signature CSV: column count mismatch" + where);
        const auto num = [&](std::size_t c) {
            const auto v = detail::parse_double(cells[c]);
            if (!v || !std::isfinite(*v) || *v < 0.0) {
                throw data_error("signature CSV: bad value '" + std::string(detail::trim(cells[c])) + "'" + where);
            }
            return *v;
        };
        TopologySignature s;
        s.model_id = std::string(detail::trim(cells[c_id]));
        s.n_pd1 = static_cast<std::size_t>(num(c_n));
        s.avg_pd1 = num(c_avg);
        s.topk_pd1 = num(c_topk);
        s.k = static_cast<std::size_t>(num(c_k));
        if (s.k == 0) throw data_error("signature CSV: k must be positive" + where);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace nntopo

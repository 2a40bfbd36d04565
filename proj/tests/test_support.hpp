#pragma once

// Shared generators and reference implementations for the test suites. The
// references here deliberately avoid the library's own algorithms.

#include <nntopo/distance.hpp>
#include <nntopo/persistence.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace nntopo::oracle {

// Uniform random dissimilarities in [0, 2). Not necessarily metric.
inline CondensedDistanceMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    std::vector<double> v(n * (n - 1) / 2);
    for (auto& x : v) x = unif(gen);
    return CondensedDistanceMatrix(n, std::move(v));
}

// Random dissimilarities drawn from a handful of levels, to force ties.
inline CondensedDistanceMatrix tied_matrix(std::size_t n, std::uint64_t seed, int levels = 4) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> pick(1, levels);
    std::vector<double> v(n * (n - 1) / 2);
    for (auto& x : v) x = 0.25 * pick(gen);
    return CondensedDistanceMatrix(n, std::move(v));
}

// Euclidean distances between random points in the unit square.
inline CondensedDistanceMatrix planar_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {unif(gen), unif(gen)};
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            v.push_back(std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
        }
    }
    return CondensedDistanceMatrix(n, std::move(v));
}

// Unit square 0-1-2-3: sides 1, diagonals sqrt(2).
inline CondensedDistanceMatrix unit_square() {
    const double s = std::sqrt(2.0);
    // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    return CondensedDistanceMatrix(4, {1.0, s, 1.0, 1.0, s, 1.0});
}

// Regular hexagon with unit side, planar Euclidean distances.
inline CondensedDistanceMatrix hexagon() {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 6; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / 6.0;
        pts.emplace_back(std::cos(a), std::sin(a));
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            v.push_back(std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
        }
    }
    return CondensedDistanceMatrix(6, std::move(v));
}

// Prim's algorithm on the complete graph; returns the MST edge weights sorted.
inline std::vector<double> prim_mst_weights(const CondensedDistanceMatrix& d) {
    const std::size_t n = d.n_points();
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    best[0] = 0.0;
    std::vector<double> weights;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
        }
        in_tree[u] = true;
        if (step > 0) weights.push_back(best[u]);
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v]) best[v] = std::min(best[v], d(u, v));
        }
    }
    std::sort(weights.begin(), weights.end());
    return weights;
}

inline CondensedDistanceMatrix scaled(const CondensedDistanceMatrix& d, double c) {
    std::vector<double> v(d.values().begin(), d.values().end());
    for (auto& x : v) x *= c;
    return CondensedDistanceMatrix(d.n_points(), std::move(v));
}

inline CondensedDistanceMatrix permuted(const CondensedDistanceMatrix& d, const std::vector<std::size_t>& perm) {
    const std::size_t n = d.n_points();
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) v.push_back(d(perm[i], perm[j]));
    }
    return CondensedDistanceMatrix(n, std::move(v));
}

// Vertex degrees of an edge list.
inline std::map<std::size_t, int> degrees(const std::vector<Edge>& edges) {
    std::map<std::size_t, int> deg;
    for (const auto& [i, j] : edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

// Finite 1D pairs by left-to-right reduction of the full edge/triangle
// boundary matrix, with each column kept as a sorted vector of edge ranks.
// Usable well beyond the brute-force size limit (a few dozen points).
inline std::vector<PersistencePair> textbook_one_dim(const CondensedDistanceMatrix& d) {
    const std::size_t n = d.n_points();
    struct Simplex {
        double value;
        std::vector<std::size_t> verts;
    };
    const auto before = [](const Simplex& a, const Simplex& b) {
        return a.value != b.value ? a.value < b.value : a.verts < b.verts;
    };
    std::vector<Simplex> edges, triangles;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({d(i, j), {i, j}});
            for (std::size_t k = j + 1; k < n; ++k) {
                triangles.push_back({std::max({d(i, j), d(i, k), d(j, k)}), {i, j, k}});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), before);
    std::sort(triangles.begin(), triangles.end(), before);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> rank;
    for (std::size_t r = 0; r < edges.size(); ++r) rank[{edges[r].verts[0], edges[r].verts[1]}] = r;

    std::map<std::size_t, std::vector<std::size_t>> column_with_low;
    std::vector<PersistencePair> pairs;
    for (const auto& t : triangles) {
        const auto& v = t.verts;
        std::vector<std::size_t> col{rank[{v[0], v[1]}], rank[{v[0], v[2]}], rank[{v[1], v[2]}]};
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const auto hit = column_with_low.find(col.back());
            if (hit == column_with_low.end()) break;
            std::vector<std::size_t> sum;
            std::set_symmetric_difference(col.begin(), col.end(), hit->second.begin(), hit->second.end(),
                                          std::back_inserter(sum));
            col = std::move(sum);
        }
        if (col.empty()) continue;
        const double birth = edges[col.back()].value;
        if (t.value > birth) pairs.push_back({1, birth, t.value});
        column_with_low.emplace(col.back(), std::move(col));
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace nntopo::oracle

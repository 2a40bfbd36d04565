#pragma once

// Vietoris-Rips persistent homology in dimensions 0 and 1 over Z/2.
//
// Filtration: vertices enter at 0, a simplex enters at the largest pairwise
// distance among its vertices. Simplices with equal value are ordered by
// dimension, then lexicographically by their ascending vertex tuple. Pairs
// with birth == death are dropped when the diagram is emitted.
//
// Dimension 0 is a Kruskal sweep with union-find. Dimension 1 reduces the
// coboundary matrix of edges (persistent cohomology), in reverse filtration
// order, skipping the edges that already killed a component (clearing).
// Triangles are never materialised: each edge's cofacets are enumerated
// lazily in filtration order, and nothing above the enclosing radius
// min_i max_j d(i, j) is visited. Representative cycles come from a homology
// reduction restricted to the triangles that the cohomology pass identified
// as death simplices.

#include <nntopo/detail/io.hpp>
#include <nntopo/distance.hpp>
#include <nntopo/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nntopo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = kInfinity;

    bool essential() const noexcept { return std::isinf(death); }
    double persistence() const noexcept { return death - birth; }

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
    friend auto operator<=>(const PersistencePair& a, const PersistencePair& b) noexcept {
        return std::tie(a.dim, a.birth, a.death) <=> std::tie(b.dim, b.birth, b.death);
    }
};

struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;
    std::size_t n_points = 0;

    std::vector<PersistencePair> in_dim(int dim) const {
        std::vector<PersistencePair> out;
        for (const auto& p : pairs) {
            if (p.dim == dim) out.push_back(p);
        }
        return out;
    }

    // Sorted by (dim, birth, death); two diagrams are equal iff their canonical forms are.
    PersistenceDiagram canonical() const {
        PersistenceDiagram c = *this;
        std::sort(c.pairs.begin(), c.pairs.end());
        return c;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

struct PersistentCycle {
    PersistencePair pair;
    std::vector<Edge> edges;
};

namespace detail {

// Vertex indices are packed 21 bits apiece, so the numeric order of a key is
// the lexicographic order of the ascending vertex tuple.
inline constexpr unsigned kVertexBits = 21;
inline constexpr std::uint64_t kVertexMask = (std::uint64_t{1} << kVertexBits) - 1;
inline constexpr std::size_t kMaxVertices = std::size_t{1} << kVertexBits;

inline constexpr std::uint64_t edge_key(std::uint64_t i, std::uint64_t j) noexcept { return (i << kVertexBits) | j; }

inline constexpr std::uint64_t triangle_key(std::uint64_t i, std::uint64_t j, std::uint64_t k) noexcept {
    return (i << (2 * kVertexBits)) | (j << kVertexBits) | k;
}

inline constexpr Edge edge_vertices(std::uint64_t key) noexcept {
    return {static_cast<std::size_t>(key >> kVertexBits), static_cast<std::size_t>(key & kVertexMask)};
}

inline constexpr std::array<std::size_t, 3> triangle_vertices(std::uint64_t key) noexcept {
    return {static_cast<std::size_t>(key >> (2 * kVertexBits)),
            static_cast<std::size_t>((key >> kVertexBits) & kVertexMask), static_cast<std::size_t>(key & kVertexMask)};
}

// A simplex of fixed dimension at its filtration value.
struct Entry {
    double value;
    std::uint64_t key;

    friend bool operator==(const Entry&, const Entry&) = default;
    friend bool operator<(const Entry& a, const Entry& b) noexcept {
        return a.value < b.value || (a.value == b.value && a.key < b.key);
    }
    friend bool operator>(const Entry& a, const Entry& b) noexcept { return b < a; }
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

inline void check_points(const CondensedDistanceMatrix& d) {
    if (d.n_points() < 2) throw data_error("persistence needs at least 2 points");
    if (d.n_points() > kMaxVertices) {
        throw data_error("persistence supports at most " + std::to_string(kMaxVertices) + " points");
    }
}

inline std::vector<Entry> sorted_edges(const CondensedDistanceMatrix& d) {
    const std::size_t n = d.n_points();
    std::vector<Entry> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({d(i, j), edge_key(i, j)});
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

struct ZeroDimSweep {
    std::vector<PersistencePair> pairs;
    std::vector<bool> kills_component;  // by sorted edge position
};

inline ZeroDimSweep zero_dim_sweep(const CondensedDistanceMatrix& d, const std::vector<Entry>& edges) {
    ZeroDimSweep out;
    out.kills_component.assign(edges.size(), false);
    UnionFind uf(d.n_points());
    std::size_t merges = 0;
    for (std::size_t pos = 0; pos < edges.size() && merges + 1 < d.n_points(); ++pos) {
        const auto [i, j] = edge_vertices(edges[pos].key);
        if (uf.unite(i, j)) {
            out.kills_component[pos] = true;
            ++merges;
            if (edges[pos].value > 0.0) out.pairs.push_back({0, 0.0, edges[pos].value});
        }
    }
    out.pairs.push_back({0, 0.0, kInfinity});
    return out;
}

// One (birth edge, death triangle) pivot of the coboundary reduction,
// including zero-persistence ones.
struct OneDimPivot {
    std::size_t edge_pos;
    Entry triangle;
};

// Reduces edge coboundary columns in reverse filtration order. A working column
// is held implicitly as the set S of edges whose coboundaries it sums: a
// triangle's coefficient is the parity of how many of its three edges lie in
// S. Each edge of S contributes a cursor that lists its cofacets in filtration
// order, so finding the next pivot only inspects triangles at or above the
// current one instead of materialising whole coboundaries.
class CoboundaryReducer {
public:
    CoboundaryReducer(const CondensedDistanceMatrix& d, const std::vector<Entry>& edges,
                      const std::vector<bool>& cleared)
        : d_(d), edges_(edges), cleared_(cleared), n_(d.n_points()), radius_(enclosing_radius(d)) {
        neighbours_.resize(n_ * (n_ - 1));
        for (std::size_t a = 0; a < n_; ++a) {
            auto* row = neighbours_.data() + a * (n_ - 1);
            std::size_t c = 0;
            for (std::size_t v = 0; v < n_; ++v) {
                if (v != a) row[c++] = {d(a, v), static_cast<std::uint32_t>(v)};
            }
            std::sort(row, row + (n_ - 1));
        }
        position_.resize(edges.size());
        for (std::size_t pos = 0; pos < edges.size(); ++pos) {
            const auto [i, j] = edge_vertices(edges[pos].key);
            position_[CondensedDistanceMatrix::index(n_, i, j)] = pos;
        }
        in_set_.assign(edges.size(), 0);
        generation_.assign(edges.size(), 0);
    }

    std::vector<OneDimPivot> run() {
        std::vector<OneDimPivot> pivots;
        for (std::size_t pos = edges_.size(); pos-- > 0;) {
            if (cleared_[pos] || edges_[pos].value > radius_) continue;
            reset_column();
            toggle(pos, nullptr);
            for (;;) {
                const auto pivot = next_odd();
                if (!pivot) break;  // essential class; cannot occur, the complex is a cone
                const auto hit = pivot_of_.find(pivot->key);
                if (hit == pivot_of_.end()) {
                    pivot_of_.emplace(pivot->key, pos);
                    pivots.push_back({pos, *pivot});
                    store_combination(pos);
                    break;
                }
                const auto it = reduction_.find(hit->second);
                if (it == reduction_.end()) {
                    toggle(hit->second, &*pivot);
                } else {
                    for (std::size_t e : it->second) toggle(e, &*pivot);
                }
            }
        }
        reset_column();
        return pivots;
    }

private:
    struct Neighbour {
        double dist;
        std::uint32_t v;
        friend bool operator<(const Neighbour& x, const Neighbour& y) noexcept {
            return x.dist < y.dist || (x.dist == y.dist && x.v < y.v);
        }
    };

    // Cofacets of edge (a, b) in filtration order. Triangles at the edge's own
    // value come first, by third vertex (key order for a fixed edge). Larger
    // values come from merging the sorted neighbour lists of a and b: vertex v
    // is emitted when the walk reaches the larger of d(a, v) and d(b, v).
    struct Cursor {
        std::uint32_t a, b;
        std::size_t pos;
        std::uint32_t generation;
        double dab;
        bool tie_phase;
        std::size_t v;       // next candidate in the tie phase
        std::size_t pa, pb;  // offsets into the neighbour lists
        std::vector<Entry> run;  // buffered equal-value cofacets
        std::size_t run_at;
    };

    std::uint64_t cofacet_key(std::size_t a, std::size_t b, std::size_t v) const noexcept {
        if (v < a) return triangle_key(v, a, b);
        if (v < b) return triangle_key(a, v, b);
        return triangle_key(a, b, v);
    }

    const Neighbour* row(std::size_t a) const noexcept { return neighbours_.data() + a * (n_ - 1); }

    // Next (distance, vertex) from the merged walk that emits a cofacet, or
    // nullopt when both lists are exhausted.
    std::optional<Entry> walk(Cursor& c) const {
        const Neighbour* ra = row(c.a);
        const Neighbour* rb = row(c.b);
        const std::size_t len = n_ - 1;
        while (c.pa < len || c.pb < len) {
            const bool from_a = c.pb >= len || (c.pa < len && !(rb[c.pb].dist < ra[c.pa].dist));
            if (from_a) {
                const auto [dist, v] = ra[c.pa++];
                if (v == c.b || d_(c.b, v) > dist) continue;
                return Entry{dist, cofacet_key(c.a, c.b, v)};
            }
            const auto [dist, v] = rb[c.pb++];
            if (v == c.a || !(d_(c.a, v) < dist)) continue;
            return Entry{dist, cofacet_key(c.a, c.b, v)};
        }
        return std::nullopt;
    }

    double next_walk_distance(const Cursor& c) const noexcept {
        const std::size_t len = n_ - 1;
        double next = kInfinity;
        if (c.pa < len) next = row(c.a)[c.pa].dist;
        if (c.pb < len) next = std::min(next, row(c.b)[c.pb].dist);
        return next;
    }

    std::optional<Entry> advance(Cursor& c) const {
        if (c.tie_phase) {
            for (; c.v < n_; ++c.v) {
                if (c.v == c.a || c.v == c.b) continue;
                if (d_(c.a, c.v) <= c.dab && d_(c.b, c.v) <= c.dab) {
                    return Entry{c.dab, cofacet_key(c.a, c.b, c.v++)};
                }
            }
            c.tie_phase = false;
            c.pa = upper(c.a, c.dab);
            c.pb = upper(c.b, c.dab);
        }
        if (c.run_at < c.run.size()) return c.run[c.run_at++];
        c.run.clear();
        c.run_at = 0;
        const auto first = walk(c);
        if (!first || first->value > radius_) {
            c.pa = c.pb = n_ - 1;
            return std::nullopt;
        }
        if (next_walk_distance(c) != first->value) return first;
        // Equal values are ordered by key; collect the whole run first.
        c.run.push_back(*first);
        while (next_walk_distance(c) == first->value) {
            if (const auto e = walk(c)) c.run.push_back(*e);
        }
        std::sort(c.run.begin(), c.run.end());
        c.run_at = 1;
        return c.run.front();
    }

    std::size_t upper(std::size_t a, double dist) const noexcept {
        const Neighbour* r = row(a);
        return static_cast<std::size_t>(
            std::upper_bound(r, r + (n_ - 1), dist, [](double x, const Neighbour& nb) { return x < nb.dist; }) - r);
    }

    std::size_t lower(std::size_t a, double dist) const noexcept {
        const Neighbour* r = row(a);
        return static_cast<std::size_t>(
            std::lower_bound(r, r + (n_ - 1), dist, [](const Neighbour& nb, double x) { return nb.dist < x; }) - r);
    }

    // Positions the cursor at its first cofacet strictly after `after`.
    void seek(Cursor& c, const Entry& after) const {
        if (after.value < c.dab) return;
        if (after.value == c.dab) {
            // Keys of (a, b, v) increase with v, so the first later key is found by bisection.
            std::size_t lo = 0, hi = n_;
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                std::array<std::size_t, 3> t{c.a, c.b, mid};
                std::sort(t.begin(), t.end());
                if (triangle_key(t[0], t[1], t[2]) > after.key) hi = mid;
                else lo = mid + 1;
            }
            c.v = lo;
            return;
        }
        c.tie_phase = false;
        c.pa = lower(c.a, after.value);
        c.pb = lower(c.b, after.value);
    }

    void toggle(std::size_t pos, const Entry* after) {
        in_set_[pos] ^= 1;
        members_.push_back(pos);
        if (!in_set_[pos]) return;
        const auto [i, j] = edge_vertices(edges_[pos].key);
        Cursor c{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), pos, ++generation_[pos],
                 edges_[pos].value, true, 0, 0, 0, {}, 0};
        if (after) seek(c, *after);
        for (;;) {
            const auto head = advance(c);
            if (!head) return;
            if (after && !(*after < *head)) continue;
            cursors_.push_back(std::move(c));
            heap_.push({*head, cursors_.size() - 1});
            return;
        }
    }

    bool in_set(std::size_t i, std::size_t j) const noexcept {
        return in_set_[position_[CondensedDistanceMatrix::index(n_, i, j)]] != 0;
    }

    // Smallest triangle after the last one examined whose coefficient is odd.
    std::optional<Entry> next_odd() {
        while (!heap_.empty()) {
            const auto [head, idx] = heap_.top();
            heap_.pop();
            Cursor& c = cursors_[idx];
            if (!in_set_[c.pos] || generation_[c.pos] != c.generation) continue;
            if (const auto next = advance(c)) heap_.push({*next, idx});
            if (examined_ && !(*examined_ < head)) continue;
            examined_ = head;
            const auto [x, y, z] = triangle_vertices(head.key);
            if ((in_set(x, y) + in_set(x, z) + in_set(y, z)) % 2 == 1) return head;
        }
        return std::nullopt;
    }

    void store_combination(std::size_t pos) {
        std::vector<std::size_t> combination;
        for (std::size_t e : members_) {
            if (in_set_[e]) {
                combination.push_back(e);
                in_set_[e] = 0;  // so duplicates in members_ are taken once
            }
        }
        for (std::size_t e : combination) in_set_[e] = 1;
        if (combination.size() > 1) {
            std::sort(combination.begin(), combination.end());
            reduction_.emplace(pos, std::move(combination));
        }
    }

    void reset_column() {
        for (std::size_t e : members_) in_set_[e] = 0;
        members_.clear();
        cursors_.clear();
        heap_ = {};
        examined_.reset();
    }

    // Past min_i max_j d(i, j) the complex is a cone, so every 1D class is born
    // and dies by then; larger edges and triangles can be ignored.
    static double enclosing_radius(const CondensedDistanceMatrix& d) {
        double r = kInfinity;
        for (std::size_t i = 0; i < d.n_points(); ++i) {
            double far = 0.0;
            for (std::size_t j = 0; j < d.n_points(); ++j) far = std::max(far, d(i, j));
            r = std::min(r, far);
        }
        return r;
    }

    struct HeapItem {
        Entry head;
        std::size_t cursor;
        friend bool operator>(const HeapItem& x, const HeapItem& y) noexcept { return y.head < x.head; }
    };

    const CondensedDistanceMatrix& d_;
    const std::vector<Entry>& edges_;
    const std::vector<bool>& cleared_;
    std::size_t n_;
    double radius_;
    std::vector<Neighbour> neighbours_;
    std::vector<std::size_t> position_;  // condensed index -> sorted edge position
    std::vector<std::uint8_t> in_set_;
    std::vector<std::uint32_t> generation_;
    std::vector<std::size_t> members_;
    std::vector<Cursor> cursors_;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap_;
    std::optional<Entry> examined_;
    std::unordered_map<std::uint64_t, std::size_t> pivot_of_;
    std::unordered_map<std::size_t, std::vector<std::size_t>> reduction_;
};

inline std::vector<PersistencePair> emit_one_dim(const std::vector<Entry>& edges,
                                                 const std::vector<OneDimPivot>& pivots) {
    std::vector<PersistencePair> pairs;
    for (const auto& p : pivots) {
        const double birth = edges[p.edge_pos].value;
        if (p.triangle.value > birth) pairs.push_back({1, birth, p.triangle.value});
    }
    return pairs;
}

}  // namespace detail

inline std::vector<PersistencePair> zero_dim_persistence(const CondensedDistanceMatrix& d) {
    detail::check_points(d);
    const auto edges = detail::sorted_edges(d);
    return detail::zero_dim_sweep(d, edges).pairs;
}

inline std::vector<PersistencePair> one_dim_persistence(const CondensedDistanceMatrix& d) {
    detail::check_points(d);
    const auto edges = detail::sorted_edges(d);
    const auto sweep = detail::zero_dim_sweep(d, edges);
    const auto pivots = detail::CoboundaryReducer(d, edges, sweep.kills_component).run();
    return detail::emit_one_dim(edges, pivots);
}

inline PersistenceDiagram vr_persistence(const CondensedDistanceMatrix& d, int max_dim = 1) {
    if (max_dim != 0 && max_dim != 1) throw usage_error("max_dim must be 0 or 1");
    detail::check_points(d);
    const auto edges = detail::sorted_edges(d);
    auto sweep = detail::zero_dim_sweep(d, edges);
    PersistenceDiagram diagram{std::move(sweep.pairs), d.n_points()};
    if (max_dim == 1) {
        const auto pivots = detail::CoboundaryReducer(d, edges, sweep.kills_component).run();
        auto one = detail::emit_one_dim(edges, pivots);
        diagram.pairs.insert(diagram.pairs.end(), one.begin(), one.end());
    }
    return diagram;
}

// Representative cycles for the k most persistent finite 1D pairs, ordered by
// persistence descending, then birth, then death, then the birth edge's
// vertex tuple. Each cycle is the reduced boundary column of the death
// triangle; its largest edge is the birth edge.
inline std::vector<PersistentCycle> representative_cycles(const CondensedDistanceMatrix& d, std::size_t k) {
    using namespace detail;
    if (k == 0) throw usage_error("representative_cycles: k must be positive");
    check_points(d);
    const auto edges = sorted_edges(d);
    const auto sweep = zero_dim_sweep(d, edges);
    const auto pivots = CoboundaryReducer(d, edges, sweep.kills_component).run();

    std::vector<const OneDimPivot*> finite;
    for (const auto& p : pivots) {
        if (p.triangle.value > edges[p.edge_pos].value) finite.push_back(&p);
    }
    std::sort(finite.begin(), finite.end(), [&](const OneDimPivot* a, const OneDimPivot* b) {
        const double ba = edges[a->edge_pos].value, bb = edges[b->edge_pos].value;
        const double pa = a->triangle.value - ba, pb = b->triangle.value - bb;
        if (pa != pb) return pa > pb;
        if (ba != bb) return ba < bb;
        if (a->triangle.value != b->triangle.value) return a->triangle.value < b->triangle.value;
        return edges[a->edge_pos].key < edges[b->edge_pos].key;
    });
    if (finite.size() > k) finite.resize(k);
    if (finite.empty()) return {};

    // Homology reduction over death triangles only: every other triangle
    // reduces to zero and never contributes to a pivot column.
    Entry last = finite.front()->triangle;
    for (const auto* p : finite) last = std::max(last, p->triangle);
    std::vector<Entry> deaths;
    for (const auto& p : pivots) {
        if (!(last < p.triangle)) deaths.push_back(p.triangle);
    }
    std::sort(deaths.begin(), deaths.end());

    std::unordered_map<std::uint64_t, std::vector<Entry>> reduced;  // death triangle -> column
    std::unordered_map<std::uint64_t, std::uint64_t> low_owner;     // edge key -> death triangle
    for (const auto& t : deaths) {
        const auto [a, b, c] = triangle_vertices(t.key);
        std::vector<Entry> column{{d(a, b), edge_key(a, b)}, {d(a, c), edge_key(a, c)}, {d(b, c), edge_key(b, c)}};
        std::sort(column.begin(), column.end());
        while (!column.empty()) {
            const auto owner = low_owner.find(column.back().key);
            if (owner == low_owner.end()) break;
            const auto& other = reduced.at(owner->second);
            std::vector<Entry> sum;
            std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                          std::back_inserter(sum));
            column = std::move(sum);
        }
        if (column.empty()) throw numerical_error("representative_cycles: death triangle reduced to zero");
        low_owner.emplace(column.back().key, t.key);
        reduced.emplace(t.key, std::move(column));
    }

    std::vector<PersistentCycle> cycles;
    for (const auto* p : finite) {
        const auto& column = reduced.at(p->triangle.key);
        if (column.back().key != edges[p->edge_pos].key) {
            throw numerical_error("representative_cycles: homology and cohomology pairings disagree");
        }
        PersistentCycle cycle{{1, edges[p->edge_pos].value, p->triangle.value}, {}};
        for (const auto& e : column) cycle.edges.push_back(edge_vertices(e.key));
        std::sort(cycle.edges.begin(), cycle.edges.end());
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

// Textbook reduction of the fully materialised boundary matrix. No clearing,
// no implicit enumeration. Meant as a reference for small inputs.
inline PersistenceDiagram brute_force_persistence(const CondensedDistanceMatrix& d, int max_dim = 1) {
    if (max_dim != 0 && max_dim != 1) throw usage_error("max_dim must be 0 or 1");
    const std::size_t n = d.n_points();
    if (n > 12) throw usage_error("brute_force_persistence: at most 12 points");
    if (n < 2) throw data_error("persistence needs at least 2 points");

    struct Simplex {
        double value;
        std::vector<std::size_t> vertices;
    };
    std::vector<Simplex> simplices;
    for (std::size_t i = 0; i < n; ++i) simplices.push_back({0.0, {i}});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) simplices.push_back({d(i, j), {i, j}});
    }
    if (max_dim == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    simplices.push_back({std::max({d(i, j), d(i, k), d(j, k)}), {i, j, k}});
                }
            }
        }
    }
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        return a.vertices < b.vertices;
    });

    std::vector<std::vector<std::size_t>> columns(simplices.size());
    {
        std::vector<std::pair<std::vector<std::size_t>, std::size_t>> index;
        for (std::size_t s = 0; s < simplices.size(); ++s) index.emplace_back(simplices[s].vertices, s);
        std::sort(index.begin(), index.end());
        const auto position = [&](const std::vector<std::size_t>& face) {
            return std::lower_bound(index.begin(), index.end(), std::make_pair(face, std::size_t{0}))->second;
        };
        for (std::size_t s = 0; s < simplices.size(); ++s) {
            const auto& vs = simplices[s].vertices;
            if (vs.size() == 1) continue;
            for (std::size_t drop = 0; drop < vs.size(); ++drop) {
                std::vector<std::size_t> face;
                for (std::size_t t = 0; t < vs.size(); ++t) {
                    if (t != drop) face.push_back(vs[t]);
                }
                columns[s].push_back(position(face));
            }
            std::sort(columns[s].begin(), columns[s].end());
        }
    }

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> owner_of_low(simplices.size(), none);
    std::vector<bool> paired(simplices.size(), false);
    PersistenceDiagram diagram{{}, n};
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        auto& col = columns[s];
        while (!col.empty() && owner_of_low[col.back()] != none) {
            const auto& other = columns[owner_of_low[col.back()]];
            std::vector<std::size_t> sum;
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(sum));
            col = std::move(sum);
        }
        if (col.empty()) continue;
        owner_of_low[col.back()] = s;
        paired[col.back()] = paired[s] = true;
        const int dim = static_cast<int>(simplices[col.back()].vertices.size()) - 1;
        const double birth = simplices[col.back()].value;
        if (simplices[s].value > birth && dim <= max_dim) diagram.pairs.push_back({dim, birth, simplices[s].value});
    }
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const int dim = static_cast<int>(simplices[s].vertices.size()) - 1;
        if (!paired[s] && dim <= max_dim) diagram.pairs.push_back({dim, simplices[s].value, kInfinity});
    }
    return diagram;
}

inline std::string diagram_to_csv(const PersistenceDiagram& diagram) {
    std::string out = "dim,birth,death\n";
    for (const auto& p : diagram.pairs) {
        out += std::to_string(p.dim) + ',' + detail::format_double(p.birth) + ',' + detail::format_double(p.death) + '\n';
    }
    return out;
}

inline PersistenceDiagram parse_diagram_csv(std::string_view text) {
    const auto rows = detail::lines(text);
    if (rows.empty() || detail::trim(rows.front().second) != "dim,birth,death") {
        throw data_error("diagram CSV: missing header 'dim,birth,death'");
    }
    PersistenceDiagram diagram;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto cells = detail::split(rows[r].second, ',');
        const auto where = " on line " + std::to_string(rows[r].first);
        if (cells.size() != 3) throw data_error("diagram CSV: expected 3 columns" + where);
        const auto dim = detail::parse_double(cells[0]);
        const auto birth = detail::parse_double(cells[1]);
        const auto death = detail::parse_double(cells[2]);
        if (!dim || (*dim != 0.0 && *dim != 1.0)) throw data_error("diagram CSV: dim must be 0 or 1" + where);
        if (!birth || !std::isfinite(*birth) || *birth < 0.0) throw data_error("diagram CSV: bad birth" + where);
        if (!death || std::isnan(*death) || *death < *birth) throw data_error("diagram CSV: bad death" + where);
        if (*death == *birth) continue;
        diagram.pairs.push_back({static_cast<int>(*dim), *birth, *death});
    }
    return diagram;
}

inline std::string cycles_to_csv(const std::vector<PersistentCycle>& cycles) {
    std::string out = "cycle,birth,death,i,j\n";
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        for (const auto& [i, j] : cycles[c].edges) {
            out += std::to_string(c) + ',' + detail::format_double(cycles[c].pair.birth) + ',' +
                   detail::format_double(cycles[c].pair.death) + ',' + std::to_string(i) + ',' + std::to_string(j) +
                   '\n';
        }
    }
    return out;
}

}  // namespace nntopo

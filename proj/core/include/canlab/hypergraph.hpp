#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "canlab/bitset.hpp"
#include "canlab/rational.hpp"

namespace canlab {

using VertexId = std::uint32_t;

// Representation cap. Acceptance-scale inputs stay below 64 vertices but the
// containers must carry up to this many.
inline constexpr VertexId kMaxVertices = 1024;

struct Pair {
    VertexId u, v;  // u < v

    Pair(VertexId a, VertexId b) {
        if (a == b) throw std::invalid_argument("Pair: endpoints must differ");
        u = a < b ? a : b;
        v = a < b ? b : a;
    }

    auto operator<=>(const Pair&) const = default;
    bool contains(VertexId x) const { return x == u || x == v; }
};

struct Triple {
    VertexId a, b, c;  // a < b < c

    Triple(VertexId x, VertexId y, VertexId z) {
        if (x == y || y == z || x == z)
            throw std::invalid_argument("Triple: vertices must be distinct");
        if (x > y) std::swap(x, y);
        if (y > z) std::swap(y, z);
        if (x > y) std::swap(x, y);
        a = x; b = y; c = z;
    }

    auto operator<=>(const Triple&) const = default;
    bool contains(VertexId x) const { return x == a || x == b || x == c; }
    bool contains(const Pair& p) const { return contains(p.u) && contains(p.v); }

    // The vertex of the triple outside pair p; p must be contained.
    VertexId third(const Pair& p) const {
        if (!contains(p)) throw std::invalid_argument("Triple::third: pair not contained");
        if (!p.contains(a)) return a;
        if (!p.contains(b)) return b;
        return c;
    }

    std::array<Pair, 3> pairs() const {
        return {Pair(a, b), Pair(a, c), Pair(b, c)};
    }
};

// Simple 2-graph with per-vertex adjacency rows. Immutable after construction.
class Graph {
public:
    explicit Graph(VertexId n);
    Graph(VertexId n, std::vector<Pair> edges);

    VertexId n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Pair>& edges() const { return edges_; }

    bool has_edge(VertexId u, VertexId v) const { return adj_[u].test(v); }
    const Bitset& row(VertexId v) const { return adj_[v]; }
    std::size_t degree(VertexId v) const { return adj_[v].count(); }

    std::size_t min_degree() const;
    std::size_t max_degree() const;

    bool operator==(const Graph&) const = default;

    static Graph complete(VertexId n);
    // Complete multipartite graph over consecutive parts of the given sizes.
    static Graph complete_multipartite(const std::vector<VertexId>& part_sizes);

private:
    VertexId n_;
    std::vector<Pair> edges_;     // sorted, unique
    std::vector<Bitset> adj_;
};

// 3-uniform hypergraph. Stores the edge list plus a codegree index: one bit
// row of "third vertices" per covered pair. The index answers every codegree
// query and drives the cancellativity scan.
class TripleSystem {
public:
    explicit TripleSystem(VertexId n);
    TripleSystem(VertexId n, std::vector<Triple> edges);

    VertexId n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Triple>& edges() const { return edges_; }
    bool has_edge(const Triple& t) const;

    // Codegree row for pair p: bitset of w with {p.u, p.v, w} an edge.
    // Null when p is not covered by any edge.
    const Bitset* codegree_row(const Pair& p) const;
    std::size_t codegree(const Pair& p) const;

    std::size_t degree(VertexId v) const { return degree_[v]; }
    std::size_t max_degree() const;
    std::size_t min_degree() const;

    // Max/min codegree over pairs of the shadow (min is 0 when no pair is covered).
    std::size_t max_codegree() const;
    std::size_t min_codegree_in_shadow() const;

    // Rebuilds the codegree index from the edge list and compares bit for bit.
    bool index_consistent() const;

    bool operator==(const TripleSystem& o) const {
        return n_ == o.n_ && edges_ == o.edges_;
    }

private:
    VertexId n_;
    std::vector<Triple> edges_;  // sorted, unique
    std::vector<std::size_t> degree_;
    // Sorted by packed pair key; value = row of third vertices.
    std::vector<std::pair<std::uint32_t, Bitset>> rows_;

    void build_index();
    friend std::vector<std::pair<std::uint32_t, Bitset>> rebuild_rows(const TripleSystem&);
};

inline std::uint32_t pair_key(const Pair& p, VertexId n) {
    return p.u * n + p.v;
}

// --- core operations ---

Graph shadow(const TripleSystem& h);

// Link of v as a graph on the same n vertices; v itself is isolated.
Graph link(const TripleSystem& h, VertexId v);

std::vector<VertexId> codegree_neighborhood(const TripleSystem& h, const Pair& p);

// Induced subgraphs keep the original vertex universe; dropped vertices
// simply become isolated.
TripleSystem induced(const TripleSystem& h, const std::vector<VertexId>& u);
TripleSystem induced(const TripleSystem& h, const Bitset& u);
Graph induced_graph(const Graph& g, const std::vector<VertexId>& u);
Graph induced_graph(const Graph& g, const Bitset& u);

// Edges of g with one endpoint in s and the other in t. Throws on overlap.
std::vector<Pair> cross_edges(const Graph& g, const Bitset& s, const Bitset& t);

// Generalized Turan constructions; parts of size ceil(n/l) come first.
std::vector<VertexId> turan_part_sizes(VertexId n, VertexId l);
Graph turan_graph_2(VertexId n, VertexId l);
TripleSystem turan_graph_3(VertexId n, VertexId l);
BigInt turan_number(VertexId n, VertexId l, unsigned r);

struct Densities {
    Rational shadow_density;  // |dH| / C(n,2)
    Rational edge_density;    // |H| / C(n,3)
};
Densities densities(const TripleSystem& h);

Bitset vertex_set(VertexId n, const std::vector<VertexId>& vs);

}  // namespace canlab

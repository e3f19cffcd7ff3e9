#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "canlab/expansion.hpp"
#include "canlab/hypergraph.hpp"
#include "canlab/report.hpp"

namespace canlab {

// Witness for a cancellativity failure: A,B edges with A^B inside C, where C
// is a third edge (triple-triple) or, for pairs (G,H), an edge of G
// (pair-witness).
struct Violation {
    enum class Kind { triple_triple, pair_witness };
    Triple a, b;
    std::variant<Pair, Triple> c;
    Kind kind;
};

std::string describe(const Violation& v);

// Lexicographically first violation (A,B,C) in sorted edge order, or nullopt.
std::optional<Violation> find_violation(const TripleSystem& h);
bool is_cancellative(const TripleSystem& h);

// A graph G containing the shadow of H such that no A,B in H and C in G u H
// (all distinct) satisfy A^B inside C. Constructed only through
// make_cancellative_pair, so every live instance is validated.
class CancellativePair {
public:
    const Graph& g() const { return g_; }
    const TripleSystem& h() const { return h_; }
    VertexId m() const { return g_.n(); }

private:
    CancellativePair(Graph g, TripleSystem h) : g_(std::move(g)), h_(std::move(h)) {}
    Graph g_;
    TripleSystem h_;
    friend std::variant<CancellativePair, struct PairRejection>
    make_cancellative_pair(Graph g, TripleSystem h);
};

struct PairRejection {
    enum class Kind { shadow_not_contained, cancellativity_violation };
    Kind kind;
    std::optional<Pair> missing_shadow_edge;  // shadow_not_contained
    std::optional<Violation> violation;       // cancellativity_violation
};

std::variant<CancellativePair, PairRejection> make_cancellative_pair(Graph g, TripleSystem h);

// Observation-level redundant cross-check: N_H(uv) independent in G for every
// covered pair. Must never return false on a validated pair.
bool codegree_independence(const CancellativePair& p);

// Shadow/size inequalities for a single cancellative H with x = 2|dH|/n^2:
//   |H| <= (x/6)^{3/2} n^3      checked exactly as 27|H|^2 <= |dH|^3
//   |H| <= x(1-x)/6 n^3 + 3n^2  exact rational comparison
// Both reports must hold for every cancellative input; reported lhs/rhs of
// the first are the squared integer quantities.
std::vector<BoundReport> check_shadow_edge_bounds(const TripleSystem& h);

// |H| <= x(1-x)/6 m^3 + 3m^2 with x = 2|G|/m^2.
BoundReport pair_density_bound(const CancellativePair& p);

// sum_{v in S} d_H(v) <= |dH| whenever G[S] is complete.
BoundReport clique_degree_bound(const CancellativePair& p, const std::vector<VertexId>& s);

// |H| <= |H[R]| + t |dH| for any clique expansion of G.
BoundReport expansion_bound(const CancellativePair& p, const CliqueExpansion& x);

// |H| <= |H[T]| + |G[T]| + |G[S,T]|/2 + |G[S]|/3 for a partition {S,T} with
// G[S] complete.
BoundReport split_bound(const CancellativePair& p, const std::vector<VertexId>& s,
                        const std::vector<VertexId>& t);

// Report-only evaluators for the asymptotic bounds; their hypotheses hold
// only for sufficiently large n, so they are never asserted.
enum class AsymptoticVariant { thm41, lem41, lem42, lem43 };

struct AsymptoticInputs {
    VertexId n;
    std::size_t edge_count;    // |H|
    std::size_t shadow_count;  // |dH| (thm41/lem41) or |G| (lem42/lem43)
};

// Default constant for the thm41 evaluator, assembled from the explicit
// constants appearing in the proof; exposed as a parameter because the paper
// only requires "C sufficiently large".
Rational default_thm41_constant(std::uint32_t k);

BoundReport asymptotic_bound_report(const AsymptoticInputs& in, std::uint32_t k,
                                    AsymptoticVariant variant,
                                    std::optional<Rational> thm41_constant = std::nullopt);

bool is_steiner_admissible(std::uint32_t k);  // k in 6N + {1,3}

}  // namespace canlab

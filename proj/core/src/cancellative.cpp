#include "canlab/cancellative.hpp"

#include <algorithm>
#include <sstream>

#include "canlab/errors.hpp"

namespace canlab {

namespace {

// Edges sharing exactly two vertices with `a`, in ascending order. These are
// the only candidates for the B role: |A ^ B| must be 2 for A^B to fit in a
// 2- or 3-set.
std::vector<Triple> two_sharing_neighbors(const TripleSystem& h, const Triple& a) {
    std::vector<Triple> out;
    for (const auto& p : a.pairs()) {
        const Bitset* row = h.codegree_row(p);
        if (!row) continue;
        for (std::size_t w = row->first(); w < row->size(); w = row->next(w)) {
            if (a.contains(static_cast<VertexId>(w))) continue;
            out.emplace_back(p.u, p.v, static_cast<VertexId>(w));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Smallest witness C covering pair q: an edge of g (when provided) beats any
// triple, since a pair is a strict prefix of the triples extending it.
std::optional<std::variant<Pair, Triple>> smallest_cover(const TripleSystem& h, const Graph* g,
                                                         const Pair& q) {
    if (g && g->has_edge(q.u, q.v)) return std::variant<Pair, Triple>(q);
    const Bitset* row = h.codegree_row(q);
    if (row && row->any())
        return std::variant<Pair, Triple>(
            Triple(q.u, q.v, static_cast<VertexId>(row->first())));
    return std::nullopt;
}

std::optional<Violation> find_violation_impl(const TripleSystem& h, const Graph* g) {
    for (const auto& a : h.edges()) {
        auto bs = two_sharing_neighbors(h, a);
        for (const auto& b : bs) {
            if (!(a < b)) continue;  // lexicographically first ordered (A,B)
            VertexId sa = 0, sb = 0;
            for (VertexId x : {a.a, a.b, a.c})
                if (!b.contains(x)) sa = x;
            for (VertexId x : {b.a, b.b, b.c})
                if (!a.contains(x)) sb = x;
            Pair q(sa, sb);
            if (auto c = smallest_cover(h, g, q)) {
                Violation v{a, b, *c,
                            std::holds_alternative<Pair>(*c) ? Violation::Kind::pair_witness
                                                             : Violation::Kind::triple_triple};
                return v;
            }
        }
    }
    return std::nullopt;
}

Rational pair_bound_rhs(VertexId m, std::size_t graph_edges) {
    // x(1-x)/6 m^3 + 3 m^2 with x = 2|G|/m^2 simplifies to
    // |G| (m^2 - 2|G|) / (3m) + 3 m^2.
    BigInt e(graph_edges);
    BigInt mm = BigInt(m) * m;
    return Rational(e * (mm - 2 * e), BigInt(3) * m) + Rational(3 * mm);
}

}  // namespace

std::string describe(const Violation& v) {
    std::ostringstream out;
    auto tri = [](const Triple& t) {
        std::ostringstream o;
        o << t.a << t.b << t.c;
        return o.str();
    };
    out << "A=" << tri(v.a) << " B=" << tri(v.b) << " C=";
    if (std::holds_alternative<Pair>(v.c)) {
        const Pair& p = std::get<Pair>(v.c);
        out << p.u << p.v;
    } else {
        out << tri(std::get<Triple>(v.c));
    }
    return out.str();
}

std::optional<Violation> find_violation(const TripleSystem& h) {
    return find_violation_impl(h, nullptr);
}

bool is_cancellative(const TripleSystem& h) {
    return !find_violation(h).has_value();
}

std::variant<CancellativePair, PairRejection> make_cancellative_pair(Graph g, TripleSystem h) {
    if (g.n() != h.n()) throw UsageError("pair: vertex universes differ");
    for (const auto& e : h.edges())
        for (const auto& p : e.pairs())
            if (!g.has_edge(p.u, p.v)) {
                PairRejection rej;
                rej.kind = PairRejection::Kind::shadow_not_contained;
                rej.missing_shadow_edge = p;
                return rej;
            }
    if (auto v = find_violation_impl(h, &g)) {
        PairRejection rej;
        rej.kind = PairRejection::Kind::cancellativity_violation;
        rej.violation = *v;
        return rej;
    }
    return CancellativePair(std::move(g), std::move(h));
}

bool codegree_independence(const CancellativePair& p) {
    const TripleSystem& h = p.h();
    for (const auto& e : h.edges()) {
        for (const auto& pr : e.pairs()) {
            const Bitset* row = h.codegree_row(pr);
            if (!row) continue;
            auto ws = row->to_vector();
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (std::size_t j = i + 1; j < ws.size(); ++j)
                    if (p.g().has_edge(ws[i], ws[j])) return false;
        }
    }
    return true;
}

std::vector<BoundReport> check_shadow_edge_bounds(const TripleSystem& h) {
    if (!is_cancellative(h)) throw UsageError("check_shadow_edge_bounds: input not cancellative");
    VertexId n = h.n();
    BigInt edges(h.edge_count());
    std::size_t shadow_edges = shadow(h).edge_count();
    BigInt sh(shadow_edges);

    // (1.1) |H| <= (x/6)^{3/2} n^3, x = 2|dH|/n^2. Squaring both sides and
    // clearing denominators leaves 27|H|^2 <= |dH|^3.
    BoundReport r1 = make_report("eq-1.1-squared", Rational(27 * edges * edges),
                                 Rational(sh * sh * sh));

    BoundReport r2 = make_report("eq-1.2", Rational(edges), pair_bound_rhs(n, shadow_edges));
    return {r1, r2};
}

BoundReport pair_density_bound(const CancellativePair& p) {
    return make_report("thm-2.6", Rational(BigInt(p.h().edge_count())),
                       pair_bound_rhs(p.m(), p.g().edge_count()));
}

BoundReport clique_degree_bound(const CancellativePair& p, const std::vector<VertexId>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (!p.g().has_edge(s[i], s[j])) throw UsageError("not-a-clique");
    BigInt lhs = 0;
    for (auto v : s) lhs += BigInt(p.h().degree(v));
    return make_report("lem-2.7", Rational(lhs),
                       Rational(BigInt(shadow(p.h()).edge_count())));
}

BoundReport expansion_bound(const CancellativePair& p, const CliqueExpansion& x) {
    auto check = verify_expansion(p.g(), x);
    if (!check.ok) throw UsageError("invalid expansion: " + check.violated);
    Bitset r = vertex_set(p.g().n(), x.remainder);
    BigInt hr(induced(p.h(), r).edge_count());
    BigInt rhs = hr + BigInt(x.t()) * BigInt(shadow(p.h()).edge_count());
    return make_report("lem-2.8", Rational(BigInt(p.h().edge_count())), Rational(rhs));
}

BoundReport split_bound(const CancellativePair& p, const std::vector<VertexId>& s,
                        const std::vector<VertexId>& t) {
    Bitset sb = vertex_set(p.m(), s);
    Bitset tb = vertex_set(p.m(), t);
    if (sb.intersects(tb) || (sb | tb).count() != p.m())
        throw UsageError("split_bound: {S,T} must partition the vertex set");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (!p.g().has_edge(s[i], s[j])) throw UsageError("not-a-clique");

    BigInt ht(induced(p.h(), tb).edge_count());
    BigInt gt(induced_graph(p.g(), tb).edge_count());
    BigInt gs(induced_graph(p.g(), sb).edge_count());
    BigInt gst(cross_edges(p.g(), sb, tb).size());
    Rational rhs = Rational(ht) + Rational(gt) + Rational(gst, BigInt(2)) + Rational(gs, BigInt(3));
    return make_report("lem-5.1", Rational(BigInt(p.h().edge_count())), rhs);
}

bool is_steiner_admissible(std::uint32_t k) {
    return k >= 3 && (k % 6 == 1 || k % 6 == 3);
}

Rational default_thm41_constant(std::uint32_t k) {
    // Assembled from the explicit constants of the proof: the k-partite pair
    // bound contributes 10^9 k^9 on eps_1^{3/2} with eps_1 <= 1100 k^4 eps,
    // plus a 260^2 k^8 eps^2 term (eps <= 1). 1100^{3/2} rounded up to 36483.
    BigInt k9 = boost::multiprecision::pow(BigInt(k), 9);
    BigInt k6 = boost::multiprecision::pow(BigInt(k), 6);
    BigInt k8 = boost::multiprecision::pow(BigInt(k), 8);
    BigInt c = BigInt(36483) * k6 * (1 + BigInt(1000000000) * k9) + BigInt(67600) * k8;
    return Rational(c);
}

BoundReport asymptotic_bound_report(const AsymptoticInputs& in, std::uint32_t k,
                                    AsymptoticVariant variant,
                                    std::optional<Rational> thm41_constant) {
    if (!is_steiner_admissible(k)) throw UsageError("k must be in 6N + {1,3}, k >= 3");
    BigInt n(in.n);
    Rational n3(n * n * n);
    Rational steiner_shadow = Rational(BigInt(k) - 1, 2 * BigInt(k)) * Rational(n * n);
    // shadow identity |dH| = (1 - eps) (k-1)/(2k) n^2
    Rational eps = Rational(1) - Rational(BigInt(in.shadow_count)) / steiner_shadow;
    if (eps < Rational(0))
        throw UsageError("asymptotic bound: shadow exceeds the Steiner reference value");

    Rational lead = Rational(BigInt(k) - 1, 6 * BigInt(k) * k) * n3;
    Rational eps32 = sqrt_upper(eps * eps * eps);  // deterministic upper approx of eps^{3/2}

    Rational rhs;
    std::string name;
    switch (variant) {
        case AsymptoticVariant::thm41: {
            Rational c = thm41_constant ? *thm41_constant : default_thm41_constant(k);
            rhs = lead - Rational(BigInt(k) - 1, 4 * BigInt(k) * k) * eps * n3 + c * eps32 * n3;
            name = "thm-4.1";
            break;
        }
        case AsymptoticVariant::lem41:
            rhs = lead - Rational(BigInt(k) - 1, 2 * BigInt(k) * k) * eps * n3 +
                  Rational(9 * boost::multiprecision::pow(BigInt(k), 3)) * eps32 * n3;
            name = "lem-4.1";
            break;
        case AsymptoticVariant::lem42:
            rhs = lead - Rational(BigInt(k) - 1, 4 * BigInt(k) * k) * eps * n3 +
                  Rational(2) * eps32 * n3;
            name = "lem-4.2";
            break;
        case AsymptoticVariant::lem43:
            rhs = lead - Rational(BigInt(k) - 1, 4 * BigInt(k) * k) * eps * n3 +
                  Rational(BigInt(1000000000) * boost::multiprecision::pow(BigInt(k), 9)) *
                      eps32 * n3;
            name = "lem-4.3";
            break;
    }
    return make_report(name, Rational(BigInt(in.edge_count)), rhs);
}

}  // namespace canlab

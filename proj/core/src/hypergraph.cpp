#include "canlab/hypergraph.hpp"

#include <algorithm>

#include "canlab/errors.hpp"

namespace canlab {

namespace {

void check_n(VertexId n) {
    if (n > kMaxVertices) throw UsageError("vertex count exceeds representation cap");
}

}  // namespace

Graph::Graph(VertexId n) : n_(n) {
    check_n(n);
    adj_.assign(n_, Bitset(n_));
}

Graph::Graph(VertexId n, std::vector<Pair> edges) : n_(n), edges_(std::move(edges)) {
    check_n(n);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(n_, Bitset(n_));
    for (const auto& e : edges_) {
        if (e.v >= n_) throw UsageError("Graph: edge endpoint out of range");
        adj_[e.u].set(e.v);
        adj_[e.v].set(e.u);
    }
}

std::size_t Graph::min_degree() const {
    std::size_t best = n_ ? degree(0) : 0;
    for (VertexId v = 1; v < n_; ++v) best = std::min(best, degree(v));
    return best;
}

std::size_t Graph::max_degree() const {
    std::size_t best = 0;
    for (VertexId v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

Graph Graph::complete(VertexId n) {
    std::vector<Pair> es;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) es.emplace_back(u, v);
    return Graph(n, std::move(es));
}

Graph Graph::complete_multipartite(const std::vector<VertexId>& part_sizes) {
    VertexId n = 0;
    for (auto s : part_sizes) n += s;
    std::vector<VertexId> part_of(n);
    VertexId at = 0;
    for (std::size_t p = 0; p < part_sizes.size(); ++p)
        for (VertexId i = 0; i < part_sizes[p]; ++i) part_of[at++] = static_cast<VertexId>(p);
    std::vector<Pair> es;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (part_of[u] != part_of[v]) es.emplace_back(u, v);
    return Graph(n, std::move(es));
}

TripleSystem::TripleSystem(VertexId n) : n_(n) {
    check_n(n);
    degree_.assign(n_, 0);
}

TripleSystem::TripleSystem(VertexId n, std::vector<Triple> edges)
    : n_(n), edges_(std::move(edges)) {
    check_n(n);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const auto& e : edges_)
        if (e.c >= n_) throw UsageError("TripleSystem: edge vertex out of range");
    build_index();
}

void TripleSystem::build_index() {
    degree_.assign(n_, 0);
    rows_.clear();
    std::vector<std::pair<std::uint32_t, VertexId>> items;
    items.reserve(edges_.size() * 3);
    for (const auto& e : edges_) {
        ++degree_[e.a];
        ++degree_[e.b];
        ++degree_[e.c];
        items.emplace_back(pair_key(Pair(e.a, e.b), n_), e.c);
        items.emplace_back(pair_key(Pair(e.a, e.c), n_), e.b);
        items.emplace_back(pair_key(Pair(e.b, e.c), n_), e.a);
    }
    std::sort(items.begin(), items.end());
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        Bitset row(n_);
        while (j < items.size() && items[j].first == items[i].first) {
            row.set(items[j].second);
            ++j;
        }
        rows_.emplace_back(items[i].first, std::move(row));
        i = j;
    }
}

bool TripleSystem::has_edge(const Triple& t) const {
    return std::binary_search(edges_.begin(), edges_.end(), t);
}

const Bitset* TripleSystem::codegree_row(const Pair& p) const {
    std::uint32_t key = pair_key(p, n_);
    auto it = std::lower_bound(rows_.begin(), rows_.end(), key,
                               [](const auto& a, std::uint32_t k) { return a.first < k; });
    if (it == rows_.end() || it->first != key) return nullptr;
    return &it->second;
}

std::size_t TripleSystem::codegree(const Pair& p) const {
    const Bitset* row = codegree_row(p);
    return row ? row->count() : 0;
}

std::size_t TripleSystem::max_degree() const {
    std::size_t best = 0;
    for (auto d : degree_) best = std::max(best, d);
    return best;
}

std::size_t TripleSystem::min_degree() const {
    std::size_t best = edges_.empty() ? 0 : degree_[0];
    for (auto d : degree_) best = std::min(best, d);
    return best;
}

std::size_t TripleSystem::max_codegree() const {
    std::size_t best = 0;
    for (const auto& [k, row] : rows_) best = std::max(best, row.count());
    return best;
}

std::size_t TripleSystem::min_codegree_in_shadow() const {
    if (rows_.empty()) return 0;
    std::size_t best = rows_[0].second.count();
    for (const auto& [k, row] : rows_) best = std::min(best, row.count());
    return best;
}

std::vector<std::pair<std::uint32_t, Bitset>> rebuild_rows(const TripleSystem& h) {
    TripleSystem fresh(h.n_, h.edges_);
    return fresh.rows_;
}

bool TripleSystem::index_consistent() const {
    auto fresh = rebuild_rows(*this);
    return fresh == rows_;
}

Graph shadow(const TripleSystem& h) {
    std::vector<Pair> es;
    es.reserve(h.edge_count() * 3);
    for (const auto& e : h.edges())
        for (const auto& p : e.pairs()) es.push_back(p);
    return Graph(h.n(), std::move(es));
}

Graph link(const TripleSystem& h, VertexId v) {
    if (v >= h.n()) throw UsageError("link: vertex out of range");
    std::vector<Pair> es;
    for (const auto& e : h.edges())
        if (e.contains(v)) {
            std::array<VertexId, 2> rest{};
            std::size_t at = 0;
            for (VertexId x : {e.a, e.b, e.c})
                if (x != v) rest[at++] = x;
            es.emplace_back(rest[0], rest[1]);
        }
    return Graph(h.n(), std::move(es));
}

std::vector<VertexId> codegree_neighborhood(const TripleSystem& h, const Pair& p) {
    if (p.v >= h.n()) throw UsageError("codegree_neighborhood: pair out of range");
    const Bitset* row = h.codegree_row(p);
    if (!row) return {};
    return row->to_vector();
}

TripleSystem induced(const TripleSystem& h, const Bitset& u) {
    std::vector<Triple> es;
    for (const auto& e : h.edges())
        if (u.test(e.a) && u.test(e.b) && u.test(e.c)) es.push_back(e);
    return TripleSystem(h.n(), std::move(es));
}

TripleSystem induced(const TripleSystem& h, const std::vector<VertexId>& u) {
    return induced(h, vertex_set(h.n(), u));
}

Graph induced_graph(const Graph& g, const Bitset& u) {
    std::vector<Pair> es;
    for (const auto& e : g.edges())
        if (u.test(e.u) && u.test(e.v)) es.push_back(e);
    return Graph(g.n(), std::move(es));
}

Graph induced_graph(const Graph& g, const std::vector<VertexId>& u) {
    return induced_graph(g, vertex_set(g.n(), u));
}

std::vector<Pair> cross_edges(const Graph& g, const Bitset& s, const Bitset& t) {
    if (s.intersects(t)) throw UsageError("non-disjoint parts");
    std::vector<Pair> out;
    for (const auto& e : g.edges()) {
        bool us = s.test(e.u), vs = s.test(e.v);
        bool ut = t.test(e.u), vt = t.test(e.v);
        if ((us && vt) || (ut && vs)) out.push_back(e);
    }
    return out;
}

std::vector<VertexId> turan_part_sizes(VertexId n, VertexId l) {
    std::vector<VertexId> sizes(l, n / l);
    for (VertexId i = 0; i < n % l; ++i) ++sizes[i];  // larger parts first
    return sizes;
}

Graph turan_graph_2(VertexId n, VertexId l) {
    if (l < 2) throw UsageError("turan_graph_2: need l >= 2");
    if (n == 0) throw UsageError("turan_graph: need n >= 1");
    return Graph::complete_multipartite(turan_part_sizes(n, l));
}

TripleSystem turan_graph_3(VertexId n, VertexId l) {
    if (l < 3) throw UsageError("turan_graph_3: need l >= 3");
    if (n == 0) throw UsageError("turan_graph: need n >= 1");
    auto sizes = turan_part_sizes(n, l);
    std::vector<VertexId> part_of(n);
    VertexId at = 0;
    for (std::size_t p = 0; p < sizes.size(); ++p)
        for (VertexId i = 0; i < sizes[p]; ++i) part_of[at++] = static_cast<VertexId>(p);
    std::vector<Triple> es;
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) {
            if (part_of[a] == part_of[b]) continue;
            for (VertexId c = b + 1; c < n; ++c) {
                if (part_of[c] == part_of[a] || part_of[c] == part_of[b]) continue;
                es.emplace_back(a, b, c);
            }
        }
    return TripleSystem(n, std::move(es));
}

BigInt turan_number(VertexId n, VertexId l, unsigned r) {
    if (r != 2 && r != 3) throw UsageError("turan_number: r must be 2 or 3");
    if (l < r) throw UsageError("turan_number: need l >= r");
    auto sizes = turan_part_sizes(n, l);
    BigInt total = 0;
    if (r == 2) {
        for (std::size_t i = 0; i < sizes.size(); ++i)
            for (std::size_t j = i + 1; j < sizes.size(); ++j)
                total += BigInt(sizes[i]) * sizes[j];
    } else {
        for (std::size_t i = 0; i < sizes.size(); ++i)
            for (std::size_t j = i + 1; j < sizes.size(); ++j)
                for (std::size_t m = j + 1; m < sizes.size(); ++m)
                    total += BigInt(sizes[i]) * sizes[j] * sizes[m];
    }
    return total;
}

Densities densities(const TripleSystem& h) {
    if (h.n() < 3) throw UsageError("densities: need n >= 3");
    Graph sh = shadow(h);
    return Densities{
        Rational(BigInt(sh.edge_count()), binomial(h.n(), 2)),
        Rational(BigInt(h.edge_count()), binomial(h.n(), 3)),
    };
}

Bitset vertex_set(VertexId n, const std::vector<VertexId>& vs) {
    Bitset b(n);
    for (auto v : vs) {
        if (v >= n) throw UsageError("vertex out of range");
        b.set(v);
    }
    return b;
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

BigInt isqrt_floor(const BigInt& x) {
    if (x < 0) throw UsageError("isqrt_floor: negative input");
    return boost::multiprecision::sqrt(x);
}

Rational sqrt_upper(const Rational& r, unsigned bits) {
    if (r < Rational(0)) throw UsageError("sqrt_upper: negative input");
    if (r == Rational(0)) return Rational(0);
    // ceil( sqrt(p/q) * 2^bits ) / 2^bits
    BigInt scale = BigInt(1) << bits;
    BigInt num = r.numerator() * scale * scale;
    BigInt root = isqrt_floor(num / r.denominator());
    while (root * root < num / r.denominator() + ((num % r.denominator()) != 0 ? 1 : 0)) ++root;
    // root >= sqrt(num/den) now; one more safety bump for the flooring above
    if (root * root * r.denominator() < num) ++root;
    return Rational(root, scale);
}

Rational rational_from_double(double x) {
    boost::multiprecision::cpp_rational r(x);
    return Rational(BigInt(boost::multiprecision::numerator(r)),
                    BigInt(boost::multiprecision::denominator(r)));
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::exception&) {
        throw UsageError("malformed rational: " + text);
    }
}

}  // namespace canlab

#include "canlab/canonical.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "canlab/errors.hpp"

namespace canlab {

std::uint32_t pack_triple(VertexId a, VertexId b, VertexId c) {
    return (a << 20) | (b << 10) | c;
}

Triple unpack_triple(std::uint32_t code) {
    return Triple(code >> 20, (code >> 10) & 0x3ff, code & 0x3ff);
}

namespace {

constexpr int kMaxCanonVertices = 255;
constexpr int kMaxCanonEdges = 64;

// Shared state for the relabeling searches. Blocks are the original edges;
// the search builds an injective relabeling vertex by vertex while matching
// image blocks against a target code position by position.
struct CanonState {
    int n = 0;
    int m = 0;
    std::array<std::array<std::uint16_t, 3>, kMaxCanonEdges> blk{};
    std::vector<std::uint64_t> through;  // per original vertex: mask of blocks
    std::array<std::int16_t, kMaxCanonVertices> label_of{};
    std::array<std::int16_t, kMaxCanonVertices> orig_of{};
    std::array<bool, kMaxCanonVertices> label_used{};
    std::uint64_t used_blocks = 0;

    void init(VertexId n_in, const std::vector<std::uint32_t>& edges) {
        if (n_in > kMaxCanonVertices)
            throw UsageError("canonical form supports n <= 255");
        if (edges.size() > kMaxCanonEdges)
            throw UsageError("canonical form supports at most 64 edges");
        n = static_cast<int>(n_in);
        m = static_cast<int>(edges.size());
        through.assign(n, 0);
        for (int i = 0; i < m; ++i) {
            Triple t = unpack_triple(edges[i]);
            blk[i] = {static_cast<std::uint16_t>(t.a), static_cast<std::uint16_t>(t.b),
                      static_cast<std::uint16_t>(t.c)};
            for (auto v : blk[i]) through[v] |= std::uint64_t{1} << i;
        }
        label_of.fill(-1);
        orig_of.fill(-1);
        label_used.fill(false);
        used_blocks = 0;
    }

    int free_label_after(int prev) const {
        for (int l = prev + 1; l < n; ++l)
            if (!label_used[l]) return l;
        return n;  // unreachable while assignments remain legal
    }

    // Smallest image triple block b can still take: assigned vertices keep
    // their labels, unassigned ones take the smallest free labels.
    std::uint32_t min_image(int b) const {
        std::array<int, 3> lab{};
        int fixed = 0, free_needed = 0;
        for (auto v : blk[b]) {
            if (label_of[v] >= 0)
                lab[fixed++] = label_of[v];
            else
                ++free_needed;
        }
        int l = -1;
        for (int i = 0; i < free_needed; ++i) {
            l = free_label_after(l);
            lab[fixed + i] = l;
        }
        std::sort(lab.begin(), lab.end());
        return pack_triple(lab[0], lab[1], lab[2]);
    }

    void assign(int orig, int label) {
        label_of[orig] = static_cast<std::int16_t>(label);
        orig_of[label] = static_cast<std::int16_t>(orig);
        label_used[label] = true;
    }
    void unassign(int orig, int label) {
        label_of[orig] = -1;
        orig_of[label] = -1;
        label_used[label] = false;
    }
};

// Enumerates (block, vertex->label bijection) choices whose image equals the
// packed triple `target`, invoking fn() with the state updated. fn returns
// true to abort early.
template <typename Fn>
bool for_each_exact_match(CanonState& st, std::uint32_t target, Fn&& fn) {
    Triple t = unpack_triple(target);
    std::array<int, 3> labels{static_cast<int>(t.a), static_cast<int>(t.b),
                              static_cast<int>(t.c)};

    // Candidate blocks must contain every original already bound to one of
    // the target labels.
    std::uint64_t cand = ~st.used_blocks;
    if (st.m < 64) cand &= (std::uint64_t{1} << st.m) - 1;
    int bound = 0;
    for (int l : labels)
        if (st.orig_of[l] >= 0) {
            cand &= st.through[st.orig_of[l]];
            ++bound;
        }

    while (cand) {
        int b = std::countr_zero(cand);
        cand &= cand - 1;

        // Split block vertices into already-bound (must hit target labels)
        // and free; reject blocks carrying labels outside the target.
        std::array<int, 3> free_orig{};
        int n_free = 0;
        bool ok = true;
        for (auto v : st.blk[b]) {
            int l = st.label_of[v];
            if (l < 0) {
                free_orig[n_free++] = v;
            } else if (l != labels[0] && l != labels[1] && l != labels[2]) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::array<int, 3> free_lab{};
        int n_free_lab = 0;
        for (int l : labels)
            if (st.orig_of[l] < 0) free_lab[n_free_lab++] = l;
        if (n_free != n_free_lab) continue;
        if (3 - n_free != bound) {
            // A bound label maps to a vertex outside this block.
            continue;
        }

        // All matchings of free vertices onto free labels.
        std::array<int, 3> perm{0, 1, 2};
        std::sort(free_orig.begin(), free_orig.begin() + n_free);
        do {
            for (int i = 0; i < n_free; ++i) st.assign(free_orig[i], free_lab[perm[i]]);
            st.used_blocks |= std::uint64_t{1} << b;
            bool stop = fn();
            st.used_blocks &= ~(std::uint64_t{1} << b);
            for (int i = 0; i < n_free; ++i) st.unassign(free_orig[i], free_lab[perm[i]]);
            if (stop) return true;
        } while (std::next_permutation(perm.begin(), perm.begin() + n_free));
    }
    return false;
}

struct SmallerImageSearch {
    CanonState st;
    std::vector<std::uint32_t> target;

    bool rec(int pos) {
        if (pos == static_cast<int>(target.size())) return false;  // automorphism
        std::uint32_t ti = target[pos];
        std::uint64_t unused = ~st.used_blocks;
        if (st.m < 64) unused &= (std::uint64_t{1} << st.m) - 1;
        std::uint64_t scan = unused;
        while (scan) {
            int b = std::countr_zero(scan);
            scan &= scan - 1;
            if (st.min_image(b) < ti) return true;
        }
        return for_each_exact_match(st, ti, [&] { return rec(pos + 1); });
    }
};

struct CanonicalSearch {
    CanonState st;
    std::vector<std::uint32_t> best;
    std::vector<std::uint32_t> cur;

    // cmp: 0 while cur tracked the incumbent prefix, -1 once strictly smaller.
    // best can shrink while a branch is in flight, so the leaf always does a
    // full lexicographic compare.
    void rec(int pos, int cmp) {
        if (pos == st.m) {
            if (cur < best) best = cur;
            return;
        }
        std::uint64_t unused = ~st.used_blocks;
        if (st.m < 64) unused &= (std::uint64_t{1} << st.m) - 1;
        std::uint32_t vmin = 0xffffffff;
        std::uint64_t scan = unused;
        while (scan) {
            int b = std::countr_zero(scan);
            scan &= scan - 1;
            vmin = std::min(vmin, st.min_image(b));
        }
        int ncmp = cmp;
        if (cmp == 0) {
            if (vmin > best[pos]) return;  // cannot beat nor tie the incumbent
            if (vmin < best[pos]) ncmp = -1;
        }
        cur.push_back(vmin);
        for_each_exact_match(st, vmin, [&] {
            rec(pos + 1, ncmp);
            return false;
        });
        cur.pop_back();
    }
};

}  // namespace

bool has_smaller_image(VertexId n, const std::vector<std::uint32_t>& edges) {
    if (edges.empty()) return false;
    SmallerImageSearch s;
    s.st.init(n, edges);
    s.target = edges;
    return s.rec(0);
}

std::vector<std::uint32_t> canonical_code(VertexId n, const std::vector<std::uint32_t>& edges) {
    if (edges.empty()) return {};
    CanonicalSearch s;
    s.st.init(n, edges);
    s.best = edges;  // identity relabeling as the incumbent
    s.cur.reserve(edges.size());
    s.rec(0, 0);
    return s.best;
}

TripleSystem canonical_form(const TripleSystem& h) {
    std::vector<std::uint32_t> packed;
    packed.reserve(h.edge_count());
    for (const auto& e : h.edges()) packed.push_back(pack_triple(e.a, e.b, e.c));
    auto code = canonical_code(h.n(), packed);
    std::vector<Triple> es;
    es.reserve(code.size());
    for (auto c : code) es.push_back(unpack_triple(c));
    return TripleSystem(h.n(), std::move(es));
}

bool isomorphic(const TripleSystem& a, const TripleSystem& b) {
    if (a.n() != b.n() || a.edge_count() != b.edge_count()) return false;
    return canonical_form(a) == canonical_form(b);
}

}  // namespace canlab

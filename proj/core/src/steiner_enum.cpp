#include <algorithm>
#include <array>
#include <mutex>

#include "canlab/canonical.hpp"
#include "canlab/errors.hpp"
#include "canlab/parallel.hpp"
#include "canlab/steiner.hpp"

namespace canlab {

namespace {

constexpr int kMaxEnumK = 31;

// Orderly generation of Steiner triple systems. Blocks are added in sorted
// order: the next block always covers the lexicographically smallest
// uncovered pair (u,v), necessarily as (u,v,w) with w > v. Every partial
// system along the path of a canonically-labeled system is itself canonical,
// so pruning branches whose block list admits a smaller relabeled image
// keeps exactly one labeled representative per isomorphism class.
struct StsSearch {
    int k;
    std::array<std::array<std::int16_t, kMaxEnumK>, kMaxEnumK> third{};
    std::vector<std::uint32_t> packed;
    std::vector<std::vector<std::uint32_t>> out;

    // When splitting work: stop expanding at this depth and emit states.
    int frontier_depth = -1;
    std::vector<std::vector<std::uint32_t>>* frontier = nullptr;

    explicit StsSearch(int k_in) : k(k_in) {
        for (auto& row : third) row.fill(-1);
    }

    void add_block(int u, int v, int w) {
        third[u][v] = third[v][u] = static_cast<std::int16_t>(w);
        third[u][w] = third[w][u] = static_cast<std::int16_t>(v);
        third[v][w] = third[w][v] = static_cast<std::int16_t>(u);
        packed.push_back(pack_triple(u, v, w));
    }

    void remove_block(int u, int v, int w) {
        third[u][v] = third[v][u] = -1;
        third[u][w] = third[w][u] = -1;
        third[v][w] = third[w][v] = -1;
        packed.pop_back();
    }

    bool smallest_uncovered(int& u, int& v) const {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                if (third[a][b] < 0) {
                    u = a;
                    v = b;
                    return true;
                }
        return false;
    }

    void search() {
        int u, v;
        if (!smallest_uncovered(u, v)) {
            out.push_back(packed);
            return;
        }
        if (frontier && static_cast<int>(packed.size()) == frontier_depth) {
            frontier->push_back(packed);
            return;
        }
        for (int w = v + 1; w < k; ++w) {
            if (third[u][w] >= 0 || third[v][w] >= 0) continue;
            add_block(u, v, w);
            if (!has_smaller_image(static_cast<VertexId>(k), packed)) search();
            remove_block(u, v, w);
        }
    }

    // Rebuild coverage state from a packed prefix (used by workers).
    void load(const std::vector<std::uint32_t>& prefix) {
        for (auto code : prefix) {
            Triple t = unpack_triple(code);
            add_block(t.a, t.b, t.c);
        }
    }
};

}  // namespace

StsCatalog enumerate_sts(std::uint32_t k, const EnumOptions& opt) {
    if (!sts_exists(k)) throw UsageError("no STS exists: k must be in 6N + {1,3}");
    if (k > 15 && !opt.override_budget)
        throw BudgetError("enumerate_sts is guarded at k <= 15 (override to lift)");
    if (k > kMaxEnumK) throw UsageError("enumerate_sts supports k <= 31");

    std::vector<std::vector<std::uint32_t>> systems;

    if (k == 1) {
        systems.push_back({});  // empty system on one vertex
    } else {
        StsSearch root(static_cast<int>(k));
        // The canonical star of vertex 0 is forced: {0,1,2},{0,3,4},...
        for (std::uint32_t v = 1; v + 1 < k; v += 2)
            root.add_block(0, v, v + 1);

        if (opt.workers <= 1 || k < 13) {
            root.search();
            systems = std::move(root.out);
        } else {
            // Expand a sequential frontier a few blocks past the star, then
            // let workers finish disjoint subtrees. The accepted set is a
            // property of each subtree alone, so the union is schedule-free.
            std::vector<std::vector<std::uint32_t>> tasks;
            root.frontier = &tasks;
            root.frontier_depth = static_cast<int>((k - 1) / 2 + 3);
            root.search();
            root.frontier = nullptr;

            std::vector<std::vector<std::vector<std::uint32_t>>> results(tasks.size());
            parallel_tasks(tasks.size(), opt.workers, [&](std::size_t i) {
                StsSearch leaf(static_cast<int>(k));
                leaf.load(tasks[i]);
                leaf.search();
                results[i] = std::move(leaf.out);
            });
            for (auto& r : results)
                for (auto& s : r) systems.push_back(std::move(s));
        }
    }

    std::sort(systems.begin(), systems.end());

    StsCatalog catalog;
    catalog.k = k;
    for (const auto& code : systems) {
        std::vector<Triple> edges;
        edges.reserve(code.size());
        for (auto c : code) edges.push_back(unpack_triple(c));
        auto sys = SteinerTripleSystem::validate(TripleSystem(k, std::move(edges)));
        if (!sys) throw std::logic_error("enumerator emitted a non-Steiner system");
        catalog.systems.push_back(std::move(*sys));
    }
    return catalog;
}

}  // namespace canlab

#include "canlab/expansion.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <numeric>

#include "canlab/errors.hpp"

namespace canlab {

namespace {

// Tomita-style branch and bound: candidates kept as bit rows, upper bound
// from a greedy coloring of the candidate set.
struct CliqueSearch {
    const Graph& g;
    Deadline deadline;
    std::size_t best = 0;
    std::vector<VertexId> best_clique;
    std::vector<VertexId> cur;

    explicit CliqueSearch(const Graph& g_in, Deadline d) : g(g_in), deadline(d) {}

    // Greedy coloring upper bound; returns vertices ordered by color class and
    // their color numbers (1-based).
    static void color_sort(const Graph& g, const Bitset& cand, std::vector<VertexId>& order,
                           std::vector<std::size_t>& colors) {
        order.clear();
        colors.clear();
        Bitset left = cand;
        std::size_t color = 0;
        while (left.any()) {
            ++color;
            Bitset cls = left;
            while (cls.any()) {
                VertexId v = static_cast<VertexId>(cls.first());
                cls.reset(v);
                left.reset(v);
                Bitset masked = cls;
                masked -= g.row(v);
                cls = masked;
                order.push_back(v);
                colors.push_back(color);
            }
        }
    }

    void expand(const Bitset& cand) {
        if (deadline.expired()) throw BudgetError("max_clique: time limit exceeded");
        std::vector<VertexId> order;
        std::vector<std::size_t> colors;
        color_sort(g, cand, order, colors);
        for (std::size_t i = order.size(); i-- > 0;) {
            if (cur.size() + colors[i] <= best) return;
            VertexId v = order[i];
            cur.push_back(v);
            Bitset next = cand & g.row(v);
            // Only vertices at earlier positions stay candidates.
            Bitset ahead(g.n());
            for (std::size_t j = 0; j < i; ++j) ahead.set(order[j]);
            next &= ahead;
            if (cur.size() > best) {
                best = cur.size();
                best_clique = cur;
            }
            if (next.any()) expand(next);
            cur.pop_back();
        }
    }
};

// Is there a clique of the given size containing `forced`, inside `allowed`?
bool exists_clique(const Graph& g, const std::vector<VertexId>& forced, const Bitset& allowed,
                   std::size_t size, Deadline deadline) {
    Bitset cand = allowed;
    for (auto v : forced) {
        cand &= g.row(v);
        cand.reset(v);
    }
    if (forced.size() >= size) return true;
    std::size_t need = size - forced.size();
    if (cand.count() < need) return false;

    struct Rec {
        const Graph& g;
        Deadline deadline;
        bool run(Bitset cand, std::size_t need) {
            if (deadline.expired()) throw BudgetError("clique probe: time limit exceeded");
            if (need == 0) return true;
            if (cand.count() < need) return false;
            std::vector<VertexId> order;
            std::vector<std::size_t> colors;
            CliqueSearch::color_sort(g, cand, order, colors);
            if (!order.empty() && colors.back() < need) return false;
            for (std::size_t i = order.size(); i-- > 0;) {
                if (colors[i] < need) return false;
                VertexId v = order[i];
                Bitset next = cand & g.row(v);
                Bitset ahead(g.n());
                for (std::size_t j = 0; j < i; ++j) ahead.set(order[j]);
                next &= ahead;
                if (run(next, need - 1)) return true;
            }
            return false;
        }
    } rec{g, deadline};
    return rec.run(cand, need);
}

}  // namespace

std::size_t clique_number(const Graph& g, Deadline deadline) {
    if (g.n() == 0) return 0;
    CliqueSearch s(g, deadline);
    Bitset all(g.n());
    for (VertexId v = 0; v < g.n(); ++v) all.set(v);
    s.expand(all);
    return s.best;
}

std::vector<VertexId> max_clique(const Graph& g, Deadline deadline) {
    if (g.n() == 0) return {};
    std::size_t omega = clique_number(g, deadline);
    if (omega == 0) return {};
    // Lexicographically smallest maximum clique: force vertices greedily.
    std::vector<VertexId> chosen;
    Bitset allowed(g.n());
    for (VertexId v = 0; v < g.n(); ++v) allowed.set(v);
    for (VertexId v = 0; v < g.n() && chosen.size() < omega; ++v) {
        if (!allowed.test(v)) continue;
        bool compatible = true;
        for (auto u : chosen)
            if (!g.has_edge(u, v)) {
                compatible = false;
                break;
            }
        if (!compatible) continue;
        chosen.push_back(v);
        if (!exists_clique(g, chosen, allowed, omega, deadline)) chosen.pop_back();
    }
    if (chosen.size() != omega) throw std::logic_error("max_clique: extraction failed");
    return chosen;
}

CliqueExpansion maximal_clique_expansion(const Graph& g, std::uint32_t kappa, Deadline deadline) {
    if (kappa < 1) throw UsageError("threshold must be >= 1");
    CliqueExpansion x;
    x.threshold = kappa;
    x.maximal = true;
    Bitset rest(g.n());
    for (VertexId v = 0; v < g.n(); ++v) rest.set(v);
    while (true) {
        Graph sub = induced_graph(g, rest);
        // Isolated removed vertices stay out of the clique search because
        // their rows are empty; restrict to `rest` explicitly anyway.
        std::vector<VertexId> clique;
        {
            CliqueSearch s(sub, deadline);
            if (rest.any()) s.expand(rest);
            std::size_t omega = s.best;
            if (omega < kappa || omega == 0) break;
            // lexicographically smallest maximum clique inside `rest`
            for (VertexId v = 0; v < g.n() && clique.size() < omega; ++v) {
                if (!rest.test(v)) continue;
                bool compatible = true;
                for (auto u : clique)
                    if (!sub.has_edge(u, v)) {
                        compatible = false;
                        break;
                    }
                if (!compatible) continue;
                clique.push_back(v);
                if (!exists_clique(sub, clique, rest, omega, deadline)) clique.pop_back();
            }
        }
        for (auto v : clique) rest.reset(v);
        x.parts.push_back(std::move(clique));
    }
    for (std::size_t v = rest.first(); v < rest.size(); v = rest.next(v))
        x.remainder.push_back(static_cast<VertexId>(v));
    auto check = verify_expansion(g, x);
    if (!check.ok) throw std::logic_error("expansion failed self-check: " + check.violated);
    return x;
}

ExpansionCheck verify_expansion(const Graph& g, const CliqueExpansion& x) {
    Bitset seen(g.n());
    for (const auto& part : x.parts) {
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (part[i] >= g.n()) return {false, "vertex-out-of-range"};
            if (seen.test(part[i])) return {false, "parts-not-disjoint"};
            seen.set(part[i]);
            for (std::size_t j = i + 1; j < part.size(); ++j)
                if (!g.has_edge(part[i], part[j])) return {false, "parts-not-cliques"};
        }
    }
    Bitset rem(g.n());
    for (auto v : x.remainder) {
        if (v >= g.n()) return {false, "vertex-out-of-range"};
        if (seen.test(v)) return {false, "remainder-overlaps-parts"};
        rem.set(v);
    }
    if ((seen | rem).count() != g.n()) return {false, "cover-incomplete"};

    if (x.maximal) {
        for (std::size_t i = 0; i + 1 < x.parts.size(); ++i)
            if (x.parts[i].size() < x.parts[i + 1].size()) return {false, "sizes-not-monotone"};
        // Observation: later vertices see at most |S_i| - 1 vertices of S_i.
        Bitset later(g.n());
        for (VertexId v = 0; v < g.n(); ++v) later.set(v);
        for (const auto& part : x.parts) {
            for (auto v : part) later.reset(v);
            for (std::size_t v = later.first(); v < later.size(); v = later.next(v)) {
                std::size_t adj = 0;
                for (auto u : part)
                    if (g.has_edge(static_cast<VertexId>(v), u)) ++adj;
                if (adj > part.size() - 1) return {false, "later-vertex-sees-whole-part"};
            }
        }
    }
    if (x.threshold) {
        for (const auto& part : x.parts)
            if (part.size() < *x.threshold) return {false, "part-below-threshold"};
        Graph sub = induced_graph(g, rem);
        if (clique_number(sub) >= *x.threshold) return {false, "remainder-clique-too-large"};
    }
    return {true, ""};
}

std::optional<std::vector<std::uint8_t>> is_k_partite(const Graph& g, std::uint32_t k,
                                                      Deadline deadline) {
    if (k < 1) throw UsageError("is_k_partite: need k >= 1");
    if (g.n() > 64) throw BudgetError("is_k_partite is guarded at n <= 64");
    std::vector<std::int16_t> color(g.n(), -1);
    std::vector<Bitset> neighbor_colors(g.n(), Bitset(k));

    struct Rec {
        const Graph& g;
        std::uint32_t k;
        Deadline deadline;
        std::vector<std::int16_t>& color;
        std::vector<Bitset>& ncol;

        bool run(std::uint32_t colored) {
            if (deadline.expired()) throw BudgetError("is_k_partite: time limit exceeded");
            if (colored == g.n()) return true;
            // Saturation-degree ordering: most constrained vertex next.
            VertexId pick = g.n();
            std::size_t best_sat = 0;
            std::size_t best_deg = 0;
            for (VertexId v = 0; v < g.n(); ++v) {
                if (color[v] >= 0) continue;
                std::size_t sat = ncol[v].count();
                std::size_t deg = g.degree(v);
                if (pick == g.n() || sat > best_sat ||
                    (sat == best_sat && deg > best_deg)) {
                    pick = v;
                    best_sat = sat;
                    best_deg = deg;
                }
            }
            for (std::uint32_t c = 0; c < k; ++c) {
                if (ncol[pick].test(c)) continue;
                color[pick] = static_cast<std::int16_t>(c);
                std::vector<VertexId> touched;
                const Bitset& row = g.row(pick);
                for (std::size_t u = row.first(); u < row.size(); u = row.next(u))
                    if (color[u] < 0 && !ncol[u].test(c)) {
                        ncol[u].set(c);
                        touched.push_back(static_cast<VertexId>(u));
                    }
                if (run(colored + 1)) return true;
                for (auto u : touched) ncol[u].reset(c);
                color[pick] = -1;
            }
            return false;
        }
    } rec{g, k, deadline, color, neighbor_colors};

    if (!rec.run(0)) return std::nullopt;
    std::vector<std::uint8_t> out(g.n());
    for (VertexId v = 0; v < g.n(); ++v) out[v] = static_cast<std::uint8_t>(color[v]);
    return out;
}

std::string expansion_to_json(const CliqueExpansion& x) {
    nlohmann::ordered_json j;
    j["parts"] = x.parts;
    j["R"] = x.remainder;
    if (x.threshold)
        j["threshold"] = *x.threshold;
    else
        j["threshold"] = nullptr;
    return j.dump();
}

}  // namespace canlab

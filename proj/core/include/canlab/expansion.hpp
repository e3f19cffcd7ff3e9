#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "canlab/hypergraph.hpp"

namespace canlab {

// Optional wall-clock guard for the exact searches.
struct Deadline {
    std::optional<std::chrono::steady_clock::time_point> at;

    static Deadline none() { return {}; }
    static Deadline after(double seconds) {
        Deadline d;
        d.at = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds));
        return d;
    }
    bool expired() const {
        return at && std::chrono::steady_clock::now() > *at;
    }
};

// (S_1,...,S_t, R): disjoint cliques of G plus the remainder.
struct CliqueExpansion {
    std::vector<std::vector<VertexId>> parts;
    std::vector<VertexId> remainder;
    std::optional<std::uint32_t> threshold;
    bool maximal = false;  // parts were peeled as maximum cliques

    std::size_t t() const { return parts.size(); }
};

struct ExpansionCheck {
    bool ok;
    std::string violated;  // named clause when !ok
};

// Maximum clique; among all maximum cliques returns the lexicographically
// smallest vertex set.
std::vector<VertexId> max_clique(const Graph& g, Deadline deadline = Deadline::none());
std::size_t clique_number(const Graph& g, Deadline deadline = Deadline::none());

// Repeatedly peels a maximum clique while its size is >= kappa; the result
// satisfies the threshold-kappa definition and is re-verified before return.
CliqueExpansion maximal_clique_expansion(const Graph& g, std::uint32_t kappa,
                                         Deadline deadline = Deadline::none());

ExpansionCheck verify_expansion(const Graph& g, const CliqueExpansion& x);

// Proper k-partition (k-coloring) when one exists. Exact backtracking with
// saturation-degree ordering; guarded at n <= 64.
std::optional<std::vector<std::uint8_t>> is_k_partite(const Graph& g, std::uint32_t k,
                                                      Deadline deadline = Deadline::none());

std::string expansion_to_json(const CliqueExpansion& x);

}  // namespace canlab

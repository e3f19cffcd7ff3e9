#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "canlab/hypergraph.hpp"
#include "canlab/report.hpp"

namespace canlab {

inline constexpr const char* kStsGeneratorVersion = "canlab-sts/1";

// A validated Steiner triple system: every pair on [k] has codegree exactly 1.
class SteinerTripleSystem {
public:
    static std::optional<SteinerTripleSystem> validate(TripleSystem h);

    const TripleSystem& underlying() const { return h_; }
    VertexId k() const { return h_.n(); }

    // Third point of the unique block through {u,v}.
    VertexId third(VertexId u, VertexId v) const { return third_[u * k() + v]; }

private:
    explicit SteinerTripleSystem(TripleSystem h);
    TripleSystem h_;
    std::vector<VertexId> third_;
};

bool is_sts(const TripleSystem& h);

struct StsCatalog {
    std::uint32_t k = 0;
    std::vector<SteinerTripleSystem> systems;  // canonical reps, minimum canonical form first
    std::string generator = kStsGeneratorVersion;
    std::string written_at;  // provenance only; never part of canonical stdout

    std::size_t count() const { return systems.size(); }
};

struct EnumOptions {
    unsigned workers = 1;
    bool override_budget = false;  // lifts the k <= 15 guard
};

// Isomorph-free exhaustive catalog via orderly generation: blocks are added
// in sorted order (always covering the smallest uncovered pair) and a partial
// system survives only while no relabeling yields a smaller sorted block
// list. Output systems are therefore canonical forms already.
StsCatalog enumerate_sts(std::uint32_t k, const EnumOptions& opt = {});

// Existence criterion k in 6N + {1,3}.
bool sts_exists(std::uint32_t k);

// --- blowups ---

struct BlowupSpec {
    const SteinerTripleSystem* base;
    std::vector<std::uint32_t> parts;  // one size per base vertex; 0 allowed
};

// Vertex universe is split into consecutive blocks of the given sizes in base
// vertex order; edges are all transversals of base blocks.
TripleSystem blowup(const BlowupSpec& spec);

// Exact count formulas: sum over base edges of n_i n_j n_l, and over base
// pairs of n_i n_j.
BigInt blowup_edge_count(const BlowupSpec& spec);
BigInt blowup_shadow_count(const BlowupSpec& spec);

// --- colorability ---

using Coloring = std::vector<VertexId>;  // vertex of H -> vertex of S

bool coloring_valid(const TripleSystem& h, const SteinerTripleSystem& s, const Coloring& phi);

// Backtracking with forced-third propagation; vertices in descending-degree
// order. Returns a verified witness when H embeds into a blowup of S.
std::optional<Coloring> is_colorable(const TripleSystem& h, const SteinerTripleSystem& s);

enum class DistanceMode { exact, local_search };

struct DistanceResult {
    std::size_t deletions;
    std::size_t sts_index;  // index into the catalog
    Coloring coloring;
    bool heuristic;  // true for local-search upper bounds
};

// Minimum edge deletions over all S in catalog(k) and colorings making every
// surviving edge map into S. Exact mode is guarded at n <= 12.
DistanceResult min_deletion_to_colorable(const TripleSystem& h, const StsCatalog& catalog,
                                         DistanceMode mode, std::uint64_t seed = 0);

// --- s(n,k) ---

struct SnkResult {
    BigInt value;
    std::size_t sts_index;
    std::vector<std::uint32_t> parts;
    bool used_empty_parts;
};

// max over S in catalog and part vectors summing to n of the blowup size.
// Near-balanced window (+-2) with exhaustive fallback for n <= 3k.
SnkResult s_n_k(std::uint32_t n, const StsCatalog& catalog);

// --- structure checks ---

// True iff link(H, v) is exactly the union of the (k-1)/2 complete bipartite
// graphs between the part pairs determined by the base blocks through v's
// part. H must equal blowup(spec).
bool link_blowup_structure(const TripleSystem& h, const BlowupSpec& spec, VertexId v);

// sum_{i<j} x_i x_j + 1/2 sum_i (x_i - 1/k)^2 <= (k-1)/(2k) on the simplex.
// Inputs are validated to sum to 1 within 1e-12 and then normalized exactly,
// making the check deterministic.
BoundReport simplex_inequality_check(const std::vector<double>& x);

// --- catalog persistence ---

std::string catalog_to_text(const StsCatalog& c, bool include_written_at);
StsCatalog catalog_from_text(const std::string& text);

struct CatalogCache {
    std::string dir;       // empty => caching disabled
    bool no_cache = false;

    // Cached load keyed by (k, generator version); entries are revalidated
    // with is_sts and the count check before use.
    StsCatalog load_or_enumerate(std::uint32_t k, const EnumOptions& opt = {}) const;
};

}  // namespace canlab

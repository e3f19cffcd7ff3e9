#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "canlab/expansion.hpp"
#include "canlab/hypergraph.hpp"
#include "canlab/report.hpp"
#include "canlab/steiner.hpp"

namespace canlab {

enum class TripleOrder {
    lexicographic,
    reverse,  // cross-validation order; optima must agree
};

struct SearchOptions {
    unsigned workers = 1;
    TripleOrder order = TripleOrder::lexicographic;
    Deadline deadline = Deadline::none();
    std::string checkpoint_path;            // empty => no checkpointing
    std::uint64_t checkpoint_every = 10'000'000;  // nodes between checkpoints
};

struct SearchResult {
    VertexId n;
    std::size_t optimum = 0;
    std::vector<TripleSystem> witnesses;  // canonical forms, deduped
    std::uint64_t nodes = 0;              // proving-pass nodes; worker-count independent
    bool proved = false;
};

// Exact maximum size of a cancellative 3-graph on n vertices.
// Branch-and-bound over the chosen triple order; optimum re-proved and
// witnesses collected in a deterministic fixed-bound pass. Guarded at n <= 9.
SearchResult max_cancellative(VertexId n, const SearchOptions& opt = {});

// Same search restricted to shadows inside g; with require_equality the
// shadow must equal g exactly (filtered at the leaves).
SearchResult max_cancellative_with_shadow(VertexId n, const Graph& g, bool require_equality,
                                          const SearchOptions& opt = {});

// --- feasible region ---

struct GCurvePoint {
    Rational x;
    bool left_branch_active;   // x^{3/2}/sqrt(6) <= x(1-x), decided by squaring
    Rational left_squared;     // x^3 / 6  ( = (x^{3/2}/sqrt 6)^2 )
    Rational right_value;      // x(1-x)
    double value;              // min of the two branches, rendered as double
};

// min{ x^{3/2}/sqrt(6), x(1-x) } with the branch decided exactly.
GCurvePoint g_upper_bound(const Rational& x);

struct RegionPoint {
    std::uint32_t k;
    std::size_t sts_index;
    std::vector<std::uint32_t> parts;
    VertexId n;
    Rational x;  // shadow density
    Rational y;  // edge density
};

// Density points of every blowup of every catalogued STS(k) over part vectors
// with entries in [1, max_part]; each generator is validated cancellative.
std::vector<RegionPoint> region_sample(const std::vector<std::uint32_t>& ks,
                                       std::uint32_t max_part, const CatalogCache& cache);

enum class ProbeSide { left, right };

struct ProbeResult {
    BoundReport report;
    Rational epsilon;
    std::uint32_t k;
    ProbeSide side;
};

// Right side: x(1-x) at x=(k-1)/k + eps against (k-1)/k^2 (exact).
// Left side: Theorem-4.1-style bound at x=(k-1)/k - eps against the asserted
// drop (k-1)/k^2 (1-eps); report only.
ProbeResult local_max_probe(std::uint32_t k, const Rational& eps, ProbeSide side);

// --- stability experiments ---

struct StabilityTrial {
    std::vector<std::uint32_t> removed_edges;  // indices into the blowup edge list
    Rational epsilon;          // from |dH'| = (1-eps)(k-1)/(2k) n^2
    bool density_bounds_hold;  // (3.1)-style lower bounds at the achieved eps
    std::size_t distance;      // min_deletion_to_colorable, exact mode
};

struct StabilitySummary {
    std::uint32_t k;
    VertexId n;
    std::size_t deletions;
    std::uint64_t seed;
    std::vector<StabilityTrial> trials;
    double reference_delta;  // 20000 k^6 eps^{1/2} at the mean eps
};

StabilitySummary stability_experiment(std::uint32_t k, VertexId n, std::size_t deletions,
                                      std::size_t trials, std::uint64_t seed,
                                      const CatalogCache& cache);

std::string search_result_to_json(const SearchResult& r);
std::string region_points_to_csv(const std::vector<RegionPoint>& pts);

}  // namespace canlab

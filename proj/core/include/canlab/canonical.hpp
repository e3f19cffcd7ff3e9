#pragma once

#include <cstdint>
#include <vector>

#include "canlab/hypergraph.hpp"

namespace canlab {

// Canonical form of a 3-graph: the lexicographically smallest sorted edge
// list over all vertex relabelings. The same routine serves the STS catalog,
// extremal witness dedup, and isomorphism tests.
//
// Edges are packed as (a<<20)|(b<<10)|c so integer order equals lexicographic
// order on (a,b,c). Supports up to 64 edges, which covers every object the
// artifact canonicalizes (catalogued STS have <= 35 blocks).
std::uint32_t pack_triple(VertexId a, VertexId b, VertexId c);
Triple unpack_triple(std::uint32_t code);

std::vector<std::uint32_t> canonical_code(VertexId n, const std::vector<std::uint32_t>& edges);
TripleSystem canonical_form(const TripleSystem& h);
bool isomorphic(const TripleSystem& a, const TripleSystem& b);

// True when some relabeling of the edge set has a strictly smaller sorted
// edge list. `edges` must be sorted. This is the isomorph-rejection test of
// the orderly STS generator: a partial system is extended only while no
// smaller image exists.
bool has_smaller_image(VertexId n, const std::vector<std::uint32_t>& edges);

}  // namespace canlab

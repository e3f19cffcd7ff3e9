#pragma once

#include <iosfwd>
#include <string>

#include "canlab/hypergraph.hpp"

namespace canlab {

// ".h3" text format: "n m" header, then m lines "a b c" with a < b < c,
// 0-based. Blank lines and lines starting with '#' are ignored.
// Writers emit edges in lexicographic order so output is byte-canonical.
TripleSystem read_h3(std::istream& in);
TripleSystem read_h3_file(const std::string& path);
void write_h3(std::ostream& out, const TripleSystem& h);
std::string to_h3(const TripleSystem& h);

// ".g2": same layout with "a b" edge lines.
Graph read_g2(std::istream& in);
Graph read_g2_file(const std::string& path);
void write_g2(std::ostream& out, const Graph& g);
std::string to_g2(const Graph& g);

void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace canlab

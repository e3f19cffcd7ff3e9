#include "canlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "canlab/errors.hpp"

namespace canlab {

namespace {

// Reads the next content line (skipping blanks and '#' comments).
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (line[i] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

TripleSystem read_h3(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw UsageError("h3: missing header");
    std::istringstream head(line);
    long long n = -1, m = -1;
    head >> n >> m;
    if (n < 0 || m < 0) throw UsageError("h3: bad header");
    std::vector<Triple> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(in, line)) throw UsageError("h3: truncated edge list");
        std::istringstream row(line);
        long long a = -1, b = -1, c = -1;
        row >> a >> b >> c;
        if (a < 0 || b < 0 || c < 0) throw UsageError("h3: bad edge line");
        if (!(a < b && b < c)) throw UsageError("h3: edge vertices must be ascending");
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b),
                           static_cast<VertexId>(c));
    }
    TripleSystem h(static_cast<VertexId>(n), std::move(edges));
    if (h.edge_count() != static_cast<std::size_t>(m))
        throw UsageError("h3: duplicate edges");
    return h;
}

TripleSystem read_h3_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open: " + path);
    return read_h3(in);
}

void write_h3(std::ostream& out, const TripleSystem& h) {
    out << h.n() << ' ' << h.edge_count() << '\n';
    for (const auto& e : h.edges()) out << e.a << ' ' << e.b << ' ' << e.c << '\n';
}

std::string to_h3(const TripleSystem& h) {
    std::ostringstream out;
    write_h3(out, h);
    return out.str();
}

Graph read_g2(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw UsageError("g2: missing header");
    std::istringstream head(line);
    long long n = -1, m = -1;
    head >> n >> m;
    if (n < 0 || m < 0) throw UsageError("g2: bad header");
    std::vector<Pair> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(in, line)) throw UsageError("g2: truncated edge list");
        std::istringstream row(line);
        long long a = -1, b = -1;
        row >> a >> b;
        if (a < 0 || b < 0) throw UsageError("g2: bad edge line");
        if (!(a < b)) throw UsageError("g2: edge vertices must be ascending");
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
    Graph g(static_cast<VertexId>(n), std::move(edges));
    if (g.edge_count() != static_cast<std::size_t>(m))
        throw UsageError("g2: duplicate edges");
    return g;
}

Graph read_g2_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open: " + path);
    return read_g2(in);
}

void write_g2(std::ostream& out, const Graph& g) {
    out << g.n() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::string to_g2(const Graph& g) {
    std::ostringstream out;
    write_g2(out, g);
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write: " + tmp.string());
        out << contents;
    }
    fs::rename(tmp, target);
}

}  // namespace canlab

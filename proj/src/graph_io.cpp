#include "rwpoly/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace rwpoly {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(ErrorKind::Parse, line, "expected a real number, got '" + std::string(tok) + "'");
  return v;
}

std::uint64_t parse_index(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(ErrorKind::Parse, line, "expected a vertex index, got '" + std::string(tok) + "'");
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct MmEntry {
  std::uint64_t i, j;  // 0-based
  double v;
  std::size_t line;
};

struct MmFile {
  std::size_t n = 0;
  bool symmetric = false;
  std::vector<MmEntry> entries;
};

MmFile read_mm(std::istream& in) {
  MmFile mm;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false, size_seen = false, pattern = false;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!header_seen) {
      auto tok = split_ws(line);
      if (tok.size() < 5 || lower(tok[0]) != "%%matrixmarket" || lower(tok[1]) != "matrix" ||
          lower(tok[2]) != "coordinate")
        throw ParseError(ErrorKind::Parse, lineno, "expected '%%MatrixMarket matrix coordinate' header");
      const std::string field = lower(tok[3]), sym = lower(tok[4]);
      if (field != "real" && field != "integer" && field != "pattern")
        throw ParseError(ErrorKind::Parse, lineno, "unsupported field '" + field + "'");
      if (sym != "general" && sym != "symmetric")
        throw ParseError(ErrorKind::Parse, lineno, "unsupported symmetry '" + sym + "'");
      pattern = field == "pattern";
      mm.symmetric = sym == "symmetric";
      header_seen = true;
      continue;
    }
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    if (!size_seen) {
      if (tok.size() != 3) throw ParseError(ErrorKind::Parse, lineno, "expected 'rows cols nnz'");
      const auto rows = parse_index(tok[0], lineno), cols = parse_index(tok[1], lineno);
      if (rows != cols) throw ParseError(ErrorKind::Parse, lineno, "matrix must be square");
      mm.n = rows;
      expected = parse_index(tok[2], lineno);
      mm.entries.reserve(expected);
      size_seen = true;
      continue;
    }
    if (tok.size() != (pattern ? 2u : 3u))
      throw ParseError(ErrorKind::Parse, lineno, "malformed entry");
    const auto i = parse_index(tok[0], lineno), j = parse_index(tok[1], lineno);
    if (i < 1 || j < 1 || i > mm.n || j > mm.n)
      throw ParseError(ErrorKind::Parse, lineno, "index out of range");
    const double v = pattern ? 1.0 : parse_real(tok[2], lineno);
    mm.entries.push_back({i - 1, j - 1, v, lineno});
  }
  if (!header_seen) throw ParseError(ErrorKind::Parse, lineno, "empty file");
  if (!size_seen) throw ParseError(ErrorKind::Parse, lineno, "missing size line");
  if (mm.entries.size() != expected)
    throw ParseError(ErrorKind::Parse, lineno,
                     "expected " + std::to_string(expected) + " entries, found " +
                         std::to_string(mm.entries.size()));
  return mm;
}

// Symmetric off-diagonal pairs from a general file: (i,j) and (j,i) are the
// two halves of one undirected entry. Values are summed per direction first.
std::vector<Edge> pair_general(const MmFile& mm, bool symmetrize, double sign) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<double, std::size_t>> dir;
  for (const auto& e : mm.entries) {
    if (e.i == e.j) continue;
    auto& slot = dir[{e.i, e.j}];
    slot.first += sign * e.v;
    slot.second = e.line;
  }
  std::vector<Edge> edges;
  for (const auto& [key, val] : dir) {
    const auto [i, j] = key;
    auto mirror = dir.find({j, i});
    if (mirror == dir.end()) {
      if (!symmetrize)
        throw ParseError(ErrorKind::Asymmetric, val.second,
                         "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") has no mirror; pass the symmetrize option to complete it");
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), val.first});
      continue;
    }
    if (i > j) continue;
    const double a = val.first, b = mirror->second.first;
    if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b)))
      throw ParseError(ErrorKind::Asymmetric, std::max(val.second, mirror->second.second),
                       "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") and its mirror differ");
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), a});
  }
  return edges;
}

LoadedGraph graph_from_mm(const MmFile& mm, const LoadOptions& opts) {
  LoadedGraph out;
  std::vector<Edge> edges;
  std::size_t loops = 0;
  for (const auto& e : mm.entries) {
    if (e.v < 0) throw ParseError(ErrorKind::NegativeWeight, e.line, "negative weight");
    if (e.i == e.j) ++loops;
  }
  if (mm.symmetric) {
    for (const auto& e : mm.entries)
      if (e.i != e.j) edges.push_back({static_cast<Vertex>(e.i), static_cast<Vertex>(e.j), e.v});
  } else {
    edges = pair_general(mm, opts.symmetrize, 1.0);
  }
  out.graph = WeightedGraph::from_edges(mm.n, edges, &out.stats);
  out.stats.self_loops_dropped = loops;
  return out;
}

LoadedGraph graph_from_edge_list(std::istream& in, const LoadOptions& opts) {
  LoadedGraph out;
  std::vector<Edge> edges;
  std::unordered_map<std::string, Vertex> ids;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  auto vertex = [&](std::string_view tok) -> Vertex {
    if (opts.remap_ids) {
      auto [it, inserted] = ids.try_emplace(std::string(tok), static_cast<Vertex>(ids.size()));
      if (inserted) out.original_ids.emplace_back(tok);
      n = std::max<std::size_t>(n, ids.size());
      return it->second;
    }
    const auto v = parse_index(tok, lineno);
    if (v >= std::numeric_limits<Vertex>::max())
      throw ParseError(ErrorKind::Parse, lineno, "vertex index too large");
    n = std::max<std::size_t>(n, v + 1);
    return static_cast<Vertex>(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body(line);
    if (auto hash = body.find('#'); hash != std::string_view::npos) {
      auto comment = split_ws(body.substr(hash + 1));
      if (comment.size() == 2 && comment[0] == "vertices")
        n = std::max<std::size_t>(n, parse_index(comment[1], lineno));
      body = body.substr(0, hash);
    }
    auto tok = split_ws(body);
    if (tok.empty()) continue;
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(ErrorKind::Parse, lineno, "expected 'u v [w]'");
    const Vertex u = vertex(tok[0]);
    const Vertex v = vertex(tok[1]);
    const double w = tok.size() == 3 ? parse_real(tok[2], lineno) : 1.0;
    if (w < 0) throw ParseError(ErrorKind::NegativeWeight, lineno, "negative weight");
    edges.push_back({u, v, w});
  }
  out.graph = WeightedGraph::from_edges(n, edges, &out.stats);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return f;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GraphFormat format_from_path(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".mtx" ? GraphFormat::MatrixMarket
                                                    : GraphFormat::EdgeList;
}

LoadedGraph read_graph(std::istream& in, GraphFormat format, const LoadOptions& opts) {
  if (format == GraphFormat::MatrixMarket) return graph_from_mm(read_mm(in), opts);
  return graph_from_edge_list(in, opts);
}

LoadedGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                       const LoadOptions& opts) {
  auto f = open_in(path);
  return read_graph(f, format, opts);
}

LoadedGraph load_graph(const std::filesystem::path& path, const LoadOptions& opts) {
  return load_graph(path, format_from_path(path), opts);
}

void write_graph(std::ostream& out, const WeightedGraph& g, GraphFormat format) {
  if (format == GraphFormat::MatrixMarket) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
    // Lower triangle, column-major: row v+1, column u+1 for u < v.
    for (const Edge& e : g.edges())
      out << (e.v + 1) << ' ' << (e.u + 1) << ' ' << format_double(e.w) << '\n';
  } else {
    out << "# vertices " << g.num_vertices() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
  }
}

void save_graph(const std::filesystem::path& path, const WeightedGraph& g, GraphFormat format) {
  auto f = open_out(path);
  write_graph(f, g, format);
  if (!f) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

void save_graph(const std::filesystem::path& path, const WeightedGraph& g) {
  save_graph(path, g, format_from_path(path));
}

void save_id_map(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  auto f = open_out(path);
  for (std::size_t i = 0; i < ids.size(); ++i) f << i << ' ' << ids[i] << '\n';
}

SddmMatrix read_sddm(std::istream& in) {
  const MmFile mm = read_mm(in);
  std::vector<double> diag(mm.n, 0.0);
  for (const auto& e : mm.entries) {
    if (e.i == e.j) {
      diag[e.i] += e.v;
    } else if (e.v > 0) {
      throw ParseError(ErrorKind::InvalidMatrix, e.line, "off-diagonal entries must be nonpositive");
    }
  }
  std::vector<Edge> edges;
  if (mm.symmetric) {
    for (const auto& e : mm.entries)
      if (e.i != e.j) edges.push_back({static_cast<Vertex>(e.i), static_cast<Vertex>(e.j), -e.v});
  } else {
    edges = pair_general(mm, false, -1.0);
  }
  return SddmMatrix(std::move(diag), WeightedGraph::from_edges(mm.n, edges));
}

SddmMatrix load_sddm(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_sddm(f);
}

void write_sddm(std::ostream& out, const SddmMatrix& m) {
  const WeightedGraph& a = m.offdiag();
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.size() << ' ' << m.size() << ' ' << (m.size() + 2 * a.num_edges()) << '\n';
  for (Vertex u = 0; u < m.size(); ++u) {
    auto nb = a.neighbors(u);
    auto wt = a.neighbor_weights(u);
    std::size_t k = 0;
    for (; k < nb.size() && nb[k] < u; ++k)
      out << (u + 1) << ' ' << (nb[k] + 1) << ' ' << format_double(-wt[k]) << '\n';
    out << (u + 1) << ' ' << (u + 1) << ' ' << format_double(m.diag()[u]) << '\n';
    for (; k < nb.size(); ++k)
      out << (u + 1) << ' ' << (nb[k] + 1) << ' ' << format_double(-wt[k]) << '\n';
  }
}

void save_sddm(const std::filesystem::path& path, const SddmMatrix& m) {
  auto f = open_out(path);
  write_sddm(f, m);
  if (!f) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace rwpoly

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwpoly/graph.hpp"

namespace rwpoly {

enum class GraphFormat { MatrixMarket, EdgeList };

/// `.mtx` selects Matrix Market, anything else the edge-list format.
GraphFormat format_from_path(const std::filesystem::path& path);

struct LoadOptions {
  /// Fill in a missing mirror entry of a general Matrix Market file instead
  /// of rejecting it.
  bool symmetrize = false;
  /// Edge lists only: treat vertex tokens as opaque labels and map them to
  /// 0..n-1 in order of first appearance.
  bool remap_ids = false;
};

struct LoadedGraph {
  WeightedGraph graph;
  BuildStats stats;
  /// original_ids[i] is the label of vertex i (empty unless remap_ids).
  std::vector<std::string> original_ids;
};

LoadedGraph read_graph(std::istream& in, GraphFormat format, const LoadOptions& opts = {});
LoadedGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                       const LoadOptions& opts = {});
LoadedGraph load_graph(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Edges sorted by (u, v), weights with 17 significant digits.
void write_graph(std::ostream& out, const WeightedGraph& g, GraphFormat format);
void save_graph(const std::filesystem::path& path, const WeightedGraph& g, GraphFormat format);
void save_graph(const std::filesystem::path& path, const WeightedGraph& g);

/// "<index> <label>" per line.
void save_id_map(const std::filesystem::path& path, const std::vector<std::string>& ids);

/// SDDM matrices travel as Matrix Market coordinate files with the diagonal
/// included and nonpositive off-diagonal entries (general or symmetric).
SddmMatrix read_sddm(std::istream& in);
SddmMatrix load_sddm(const std::filesystem::path& path);
/// Written as a general coordinate file, row-major, both triangles.
void write_sddm(std::ostream& out, const SddmMatrix& m);
void save_sddm(const std::filesystem::path& path, const SddmMatrix& m);

std::string format_double(double x);

}  // namespace rwpoly

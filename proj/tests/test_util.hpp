#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rwpoly/graph.hpp"

namespace testutil {

inline rwpoly::WeightedGraph make(std::size_t n, std::vector<rwpoly::Edge> e) {
  return rwpoly::WeightedGraph::from_edges(n, e);
}

inline rwpoly::WeightedGraph triangle() { return make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

inline rwpoly::WeightedGraph four_cycle() {
  return make(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi2_pvalue(double stat, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Per-test scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  if (!f) return {};
  std::string s;
  char buf[4096];
  std::size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, k);
  std::fclose(f);
  return s;
}

}  // namespace testutil

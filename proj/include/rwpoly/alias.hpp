#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "rwpoly/rng.hpp"

namespace rwpoly {

/// Walker/Vose alias table: O(n) build, O(1) draws.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  double total() const noexcept { return total_; }

  std::size_t sample(Rng& rng) const {
    // One uniform supplies both the column and the coin.
    const double x = rng.uniform() * static_cast<double>(prob_.size());
    const std::size_t i = std::min(static_cast<std::size_t>(x), prob_.size() - 1);
    return x - static_cast<double>(i) < prob_[i] ? i : alias_[i];
  }

  /// Probability of outcome i implied by the table (for verification).
  double probability(std::size_t i) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  double total_ = 0;
};

/// Many small alias tables packed into flat arrays, one segment per row.
/// Used for per-vertex neighbour distributions.
class SegmentedAlias {
 public:
  SegmentedAlias() = default;
  /// Row i owns weights[offsets[i] .. offsets[i+1]).
  SegmentedAlias(std::span<const std::size_t> offsets, std::span<const double> weights);

  /// Index local to the row; the row must have positive total weight.
  std::size_t sample(std::size_t row, Rng& rng) const {
    const std::size_t begin = offsets_[row];
    const std::size_t len = offsets_[row + 1] - begin;
    const double x = rng.uniform() * static_cast<double>(len);
    const std::size_t j = std::min(static_cast<std::size_t>(x), len - 1);
    return x - static_cast<double>(j) < prob_[begin + j] ? j : alias_[begin + j];
  }

  double row_total(std::size_t row) const noexcept { return totals_[row]; }
  double probability(std::size_t row, std::size_t local) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<double> totals_;
};

}  // namespace rwpoly

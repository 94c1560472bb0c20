#include "rwpoly/alias.hpp"

#include <cmath>

#include "rwpoly/error.hpp"

namespace rwpoly {

namespace {

// Vose's construction on one segment. Writes local alias indices.
double build_segment(std::span<const double> w, std::span<double> prob,
                     std::span<std::uint32_t> alias, std::vector<std::uint32_t>& small,
                     std::vector<std::uint32_t>& large) {
  const std::size_t n = w.size();
  double total = 0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0, ErrorKind::InvalidArgument,
            "alias weights must be finite and nonnegative");
    total += x;
  }
  if (n == 0) return 0;
  if (total <= 0) {
    for (std::size_t i = 0; i < n; ++i) {
      prob[i] = 0;
      alias[i] = static_cast<std::uint32_t>(i);
    }
    return 0;
  }
  small.clear();
  large.clear();
  const double scale = static_cast<double>(n) / total;
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = w[i] * scale;
    alias[i] = static_cast<std::uint32_t>(i);
    (prob[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    alias[s] = l;
    prob[l] = (prob[l] + prob[s]) - 1.0;
    if (prob[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t i : large) prob[i] = 1.0;
  for (std::uint32_t i : small) prob[i] = 1.0;
  return total;
}

double segment_probability(std::span<const double> prob, std::span<const std::uint32_t> alias,
                           std::size_t i) {
  const std::size_t n = prob.size();
  double p = std::min(prob[i], 1.0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != i && alias[j] == i) p += 1.0 - std::min(prob[j], 1.0);
  return p / static_cast<double>(n);
}

}  // namespace

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  std::vector<std::uint32_t> small, large;
  total_ = build_segment(weights, prob_, alias_, small, large);
  require(weights.empty() || total_ > 0, ErrorKind::InvalidArgument,
          "alias table needs positive total weight");
}

double AliasTable::probability(std::size_t i) const {
  return segment_probability(prob_, alias_, i);
}

SegmentedAlias::SegmentedAlias(std::span<const std::size_t> offsets, std::span<const double> weights)
    : offsets_(offsets.begin(), offsets.end()),
      prob_(weights.size()),
      alias_(weights.size()),
      totals_(offsets.empty() ? 0 : offsets.size() - 1) {
  std::vector<std::uint32_t> small, large;
  for (std::size_t r = 0; r + 1 < offsets_.size(); ++r) {
    const std::size_t b = offsets_[r], e = offsets_[r + 1];
    totals_[r] = build_segment(weights.subspan(b, e - b), std::span(prob_).subspan(b, e - b),
                               std::span(alias_).subspan(b, e - b), small, large);
  }
}

double SegmentedAlias::probability(std::size_t row, std::size_t local) const {
  const std::size_t b = offsets_[row], e = offsets_[row + 1];
  return segment_probability(std::span(prob_).subspan(b, e - b),
                             std::span(alias_).subspan(b, e - b), local);
}

}  // namespace rwpoly

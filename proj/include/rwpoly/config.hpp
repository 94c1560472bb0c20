#pragma once

#include <cstdint>

namespace rwpoly {

enum class ErMethod { Auto, DenseExact, Sketch };

const char* to_string(ErMethod m) noexcept;

/// Knobs shared by every sparsification routine. Randomness is passed
/// separately as an RngStream.
struct SparsifyConfig {
  double epsilon = 0.5;
  /// Oversampling constant in M = c_s * ln n * (total mass) / eps^2.
  double c_s = 4.0;
  bool second_stage = true;
  /// Fraction of epsilon spent on path sampling; the rest goes to the
  /// resistance-based second stage.
  double split = 0.5;
  /// Give stage one the whole budget when stage two could never drop an
  /// edge (its budget exceeds n(n-1)/2).
  bool adaptive_split = true;
  /// Process each connected component separately instead of refusing.
  bool allow_disconnected = false;
  /// Sampling threads; 0 means hardware concurrency.
  unsigned threads = 0;
  /// Samples per deterministic work unit.
  std::uint64_t chunk_size = 1u << 16;
  /// Resistance estimation for the second stage.
  ErMethod er_method = ErMethod::Auto;
  double er_delta = 0.2;

  /// Throws InvalidArgument unless 0 < epsilon <= 1, c_s > 0, 0 < split < 1.
  void validate() const;
};

}  // namespace rwpoly

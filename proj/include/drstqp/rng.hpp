#pragma once

#include <cstdint>

namespace drstqp {

/// Identifies a reproducible random stream. Identical (seed, stream) pairs
/// yield identical sample sequences on every platform; distinct streams are
/// statistically independent for practical purposes.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Derived stream for sub-task `k` (trial index, grid cell, start index).
  [[nodiscard]] RngSpec sub(std::uint64_t k) const;
};

/// Counter-based 64-bit generator (SplitMix64: Steele, Lea & Flood 2014).
/// The state advances by a fixed odd constant and each output is a bijective
/// finalizer of the counter, so sequences are trivially reproducible and
/// streams can be split without correlation. Normal variates use Box-Muller,
/// exponential variates use inversion; both are chosen for reproducibility,
/// not speed.
class Rng {
 public:
  explicit Rng(RngSpec spec);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();
  /// Standard normal.
  double normal();
  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace drstqp

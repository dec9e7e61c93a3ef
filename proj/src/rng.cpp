#include "drstqp/rng.hpp"

#include <cmath>
#include <numbers>

namespace drstqp {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

RngSpec RngSpec::sub(std::uint64_t k) const {
  return RngSpec{seed, mix64(stream * 0xD1342543DE82EF95ULL ^ (k + 1))};
}

Rng::Rng(RngSpec spec) : state_(mix64(spec.seed) ^ mix64(~spec.stream)) {}

std::uint64_t Rng::next_u64() {
  state_ += kGamma;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform_pos();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::exponential(double rate) {
  return -std::log(uniform_pos()) / rate;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection-free is unnecessary here; modulo bias is < 2^-53 for desk sizes
  return next_u64() % bound;
}

}  // namespace drstqp

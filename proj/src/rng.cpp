#include "spendtraits/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spendtraits {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
  // Warm up so that small seeds decorrelate immediately.
  splitmix64(state_);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
  // Rejection sampling to avoid modulo bias.
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double Rng::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

double Rng::lognormal(double log_mean, double log_sigma) {
  return std::exp(log_mean + log_sigma * normal());
}

int Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("Rng::poisson: negative mean");
  if (mean == 0.0) return 0;
  double limit = std::exp(-mean);
  double product = next_double();
  int count = 0;
  while (product > limit) {
    product *= next_double();
    ++count;
  }
  return count;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  shuffle(p);
  return p;
}

Rng Rng::derive(std::string_view name) const {
  std::uint64_t h = fnv1a64(name);
  // Mix the root seed with the name hash; the multiplier spreads nearby seeds.
  return Rng(seed_ * 0x9e3779b97f4a7c15ULL + h);
}

Rng Rng::derive(std::string_view name, std::uint64_t index) const {
  std::uint64_t h = fnv1a64(name);
  h ^= (index + 0x9e3779b97f4a7c15ULL) * 0xff51afd7ed558ccdULL;
  return Rng(seed_ * 0x9e3779b97f4a7c15ULL + h);
}

}  // namespace spendtraits

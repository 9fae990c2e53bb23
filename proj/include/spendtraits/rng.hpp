#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace spendtraits {

// Deterministic generator used for every random draw in the project.
// SplitMix64 core, so streams are reproducible across platforms and
// independent of the standard library's distribution implementations.
// Substreams are derived by name from a root seed; no ambient entropy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; pairs are cached.
  double normal();
  double lognormal(double log_mean, double log_sigma);
  // Knuth's method; fine for the small means used here.
  int poisson(double mean);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Seeded permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

  // Named substream, e.g. rng.derive("bootstrap", tree_index).
  Rng derive(std::string_view name) const;
  Rng derive(std::string_view name, std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// FNV-1a, used for substream derivation and config hashing.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace spendtraits

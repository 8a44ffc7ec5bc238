#ifndef CLIQUENASH_RNG_HPP
#define CLIQUENASH_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

namespace cliquenash {

/// Counter-based deterministic random generator (splitmix64 over a
/// seed + counter pair). Output is identical on every platform, so
/// seeded experiments replay bit-for-bit. Instances are cheap to copy;
/// derive() forks an independent stream for a labelled sub-task.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (++counter_);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform integer in [0, n). Rejection-free modulo is fine here:
  /// n is tiny compared to 2^64, bias is below 2^-40 for n < 2^24.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// Uniformly random k-subset of {0,...,n-1}, returned sorted.
  std::vector<int> sample_subset(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Independent stream for a sub-task; the label keeps sibling
  /// streams from colliding.
  Rng derive(std::uint64_t label) const {
    Rng child(seed_ ^ (0x9e3779b97f4a7c15ull + label * 0xd1342543de82ef95ull));
    return child;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace cliquenash

#endif

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace swapdesign {

/// Counter-based pseudo-random stream (SplitMix64 core).
///
/// Every stream is identified by a 64-bit key; drawing advances a counter and
/// hashes (key, counter). Substreams are derived by hashing the parent key
/// with an id, so draws are reproducible and independent of the order in
/// which sibling substreams are consumed. All distributions are implemented
/// here rather than via <random> so that output is identical across
/// platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key), state_(key) {}

  /// Child stream whose draws are independent of this stream's position.
  [[nodiscard]] RngStream substream(std::uint64_t id) const;

  /// Fold a path of ids into a key: stream for (master, {n, scenario, rep}).
  static RngStream from_path(std::uint64_t master,
                             std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (second value cached).
  double normal();

  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Random permutation of {0, ..., n-1}.
  std::vector<int> permutation(int n);

 private:
  std::uint64_t key_;
  std::uint64_t state_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

/// Stateless key derivation used for hierarchical seeding.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id);

}  // namespace swapdesign

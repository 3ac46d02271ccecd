#include "swapdesign/rng.hpp"

#include <cmath>
#include <numbers>

namespace swapdesign {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id) {
  return mix64(parent ^ mix64(id + kGamma));
}

RngStream RngStream::substream(std::uint64_t id) const {
  return RngStream(derive_key(key_, id));
}

RngStream RngStream::from_path(std::uint64_t master,
                               std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = mix64(master + kGamma);
  for (std::uint64_t id : path) key = derive_key(key, id);
  return RngStream(key);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  // rejection sampling over the largest multiple of bound
  std::uint64_t threshold = (0ull - bound) % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

bool RngStream::bernoulli(double p) {
  return uniform() < p;
}

std::vector<int> RngStream::permutation(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  shuffle(std::span<int>(perm));
  return perm;
}

}  // namespace swapdesign

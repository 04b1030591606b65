#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace scq {

/// SplitMix64 (Steele, Lea & Flood). Portable, seedable, and cheap to
/// construct, so every shot can own an independent stream.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(uniform() * n);
  }

  std::uint64_t state() const noexcept { return state_; }

private:
  std::uint64_t state_;
};

/// Derives the seed of sub-stream `index` from `seed`:
/// mix(seed, index) = SplitMix64(seed ^ (0xD1B54A32D192ED03 * (index + 1))).next().
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Walker/Vose alias table: O(1) sampling from a discrete distribution.
/// Weights need not be normalised; negative weights are treated as zero.
class AliasTable {
public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }

  /// Maps one uniform variate in [0, 1) to an outcome index.
  std::size_t sample(double u) const noexcept {
    const double scaled = u * static_cast<double>(prob_.size());
    std::size_t i = static_cast<std::size_t>(scaled);
    if (i >= prob_.size()) i = prob_.size() - 1;
    return (scaled - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
  }

private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace scq

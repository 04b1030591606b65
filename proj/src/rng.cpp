#include "scq/rng.hpp"

#include <stdexcept>

namespace scq {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: empty distribution");
  double total = 0.0;
  for (double w : weights) total += w > 0.0 ? w : 0.0;
  if (!(total > 0.0)) throw std::invalid_argument("AliasTable: distribution has no mass");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = (weights[i] > 0.0 ? weights[i] : 0.0) * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers hold 1 up to rounding; zero-weight items must stay unreachable.
  for (std::uint32_t l : large) {
    prob_[l] = 1.0;
    alias_[l] = l;
  }
  for (std::uint32_t s : small) {
    if (scaled[s] > 0.0 || weights[s] > 0.0) {
      prob_[s] = 1.0;
      alias_[s] = s;
    } else {
      prob_[s] = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (weights[j] > 0.0) {
          alias_[s] = static_cast<std::uint32_t>(j);
          break;
        }
      }
    }
  }
}

}  // namespace scq

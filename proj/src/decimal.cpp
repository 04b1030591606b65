#include "scq/decimal.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace scq {

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  // from_chars rejects a leading '+'; accept it for hand-written documents.
  if (text.front() == '+') text.remove_prefix(1);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return false;
  out = v;
  return true;
}

std::string shortest_repr(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("shortest_repr: formatting failed");
  return std::string(buf, ptr);
}

Decimal::Decimal(std::string text) : text_(std::move(text)) {
  if (!parse_double(text_, value_)) {
    throw std::invalid_argument("not a finite decimal: '" + text_ + "'");
  }
}

Decimal Decimal::from_double(double value) { return Decimal(shortest_repr(value)); }

}  // namespace scq

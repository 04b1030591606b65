#pragma once

#include <string>
#include <string_view>

namespace scq {

/// A decimal number kept together with the exact text it was read from.
///
/// Calibration tables are stored as strings-of-record so that a
/// load/serialize cycle reproduces them character for character; the
/// parsed value is what the numerics use.
class Decimal {
public:
  Decimal() = default;

  /// Parses `text`; throws std::invalid_argument unless it is a finite
  /// decimal literal.
  explicit Decimal(std::string text);

  static Decimal from_double(double value);

  double value() const noexcept { return value_; }
  const std::string& text() const noexcept { return text_; }

  operator double() const noexcept { return value_; }

  friend bool operator==(const Decimal& a, const Decimal& b) noexcept {
    return a.text_ == b.text_;
  }

private:
  std::string text_ = "0";
  double value_ = 0.0;
};

/// Shortest decimal string that parses back to exactly `value`.
std::string shortest_repr(double value);

/// Strict parse of a whole string as a finite double.
bool parse_double(std::string_view text, double& out);

}  // namespace scq

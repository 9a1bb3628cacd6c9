#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eda_core.hpp"

namespace noisy_eda {

namespace detail {

inline std::optional<double> parse_positive_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v)) return std::nullopt;
  return v;
}

} // namespace detail

/// Resolve a virtual population size written relative to the dimension:
/// "500", "5d", "d", "d/2", "3d/4", or "theory" (7 sigma^2 sqrt(d) (ln d)^2).
/// `theory_k` supplies the value used for "theory".
inline double parse_k(std::string_view text, std::size_t d, std::optional<double> theory_k = std::nullopt) {
  auto fail = [&]() -> double {
    throw InvalidParameter("invalid value for 'k': '" + std::string(text) + "'");
  };
  if (text == "theory") {
    if (!theory_k) fail();
    return *theory_k;
  }
  const auto pos = text.find('d');
  if (pos == std::string_view::npos) {
    auto v = detail::parse_positive_number(text);
    return v ? *v : fail();
  }
  double coeff = 1.0;
  if (pos > 0) {
    auto c = detail::parse_positive_number(text.substr(0, pos));
    if (!c) fail();
    coeff = *c;
  }
  double divisor = 1.0;
  std::string_view rest = text.substr(pos + 1);
  if (!rest.empty()) {
    if (rest.front() != '/') fail();
    auto q = detail::parse_positive_number(rest.substr(1));
    if (!q) fail();
    divisor = *q;
  }
  return coeff * static_cast<double>(d) / divisor;
}

} // namespace noisy_eda

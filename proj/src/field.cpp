#include "poncelet/field.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace poncelet {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Scalar Scalar::parse(std::string_view text, Mode mode) {
  if (mode == Mode::exact) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return Scalar(q);
  }
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x))
    throw std::invalid_argument("malformed float '" + std::string(text) + "'");
  return Scalar(x);
}

std::string Scalar::str() const {
  if (mode() == Mode::exact) return exact().get_str();
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), floating());
  return std::string(buf, ptr);
}

}  // namespace poncelet

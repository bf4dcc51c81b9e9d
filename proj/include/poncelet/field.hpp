#pragma once

// Scalar fields used throughout the library.
//
// Every algorithm is written once as a template over a field K and
// instantiated for exact rationals (GMP) and for binary64 floats, real or
// complex. Field-specific behaviour (zero tests, magnitudes, canonical
// scaling) lives in FieldTraits<K>.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace poncelet {

using Rational = mpq_class;
using Complex = std::complex<double>;

enum class Mode { exact, floating };

inline std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::exact;
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct FieldTraits<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::fabs(x); }
  static Complex to_complex(double x) { return {x, 0.0}; }
};

template <>
struct FieldTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::floating;
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
};

template <class K>
concept Field = requires { FieldTraits<K>::exact; };

template <class K>
inline constexpr bool is_exact_v = FieldTraits<K>::exact;

template <Field K>
bool is_zero(const K& x) {
  return FieldTraits<K>::is_zero(x);
}

template <Field K>
double magnitude(const K& x) {
  return FieldTraits<K>::magnitude(x);
}

// Field conversion used when an exact object is handed to a float routine.
template <Field To, Field From>
To convert(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, Rational>) {
    return To(x.get_d());
  } else if constexpr (std::is_same_v<To, Complex>) {
    return Complex(x);
  } else {
    static_assert(!std::is_same_v<To, To>, "lossy field conversion");
  }
}

// Raised when exact and float values meet in one computation.
class ModeMismatch : public std::logic_error {
 public:
  ModeMismatch() : std::logic_error("mixed exact and float scalars in one computation") {}
};

/// Runtime dual-mode number. The typed algorithms work on Rational or double
/// directly; Scalar is the boundary type used by serialization, where the
/// mode is only known at run time.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(double x) : value_(x) {}

  Mode mode() const { return std::holds_alternative<Rational>(value_) ? Mode::exact : Mode::floating; }

  const Rational& exact() const {
    if (mode() != Mode::exact) throw ModeMismatch();
    return std::get<Rational>(value_);
  }
  double floating() const {
    if (mode() != Mode::floating) throw ModeMismatch();
    return std::get<double>(value_);
  }
  double to_double() const {
    return mode() == Mode::exact ? std::get<Rational>(value_).get_d() : std::get<double>(value_);
  }

  /// Parses "p", "-p" or "p/q" in exact mode, a decimal literal in float mode.
  /// Throws std::invalid_argument on malformed text or a zero denominator.
  static Scalar parse(std::string_view text, Mode mode);

  /// "p/q" (or "p") in exact mode; shortest round-trip decimal in float mode.
  std::string str() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, auto y) { return x + y; }); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, auto y) { return x - y; }); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, auto y) { return x * y; }); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.mode() == Mode::exact && b.mode() == a.mode() && sgn(b.exact()) == 0) throw std::domain_error("division by zero");
    return combine(a, b, [](auto x, auto y) { return x / y; });
  }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) throw ModeMismatch();
    return a.value_ == b.value_;
  }

 private:
  template <class Op>
  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    if (a.mode() != b.mode()) throw ModeMismatch();
    if (a.mode() == Mode::exact) return Scalar(Rational(op(a.exact(), b.exact())));
    return Scalar(static_cast<double>(op(a.floating(), b.floating())));
  }

  std::variant<Rational, double> value_;
};

}  // namespace poncelet

#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <ostream>
#include <string>

#include "tropcover/errors.hpp"

namespace tropcover {

/// Exact rational scalar. All metric data in the library is exact; no
/// floating point is used anywhere.
using Rat = boost::rational<long long>;

inline std::string format_rational(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q" or "p". Throws Errc::ParseError on malformed input.
inline Rat parse_rational(const std::string& text) {
  const auto bad = [&] {
    throw Error(Errc::ParseError, "malformed rational '" + text + "'");
  };
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      long long num = std::stoll(text, &used);
      if (used != text.size()) bad();
      return Rat(num);
    }
    std::size_t used_n = 0, used_d = 0;
    const std::string ns = text.substr(0, slash);
    const std::string ds = text.substr(slash + 1);
    if (ns.empty() || ds.empty()) bad();
    long long num = std::stoll(ns, &used_n);
    long long den = std::stoll(ds, &used_d);
    if (used_n != ns.size() || used_d != ds.size() || den == 0) bad();
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad();
  }
  return Rat(0);  // unreachable
}

/// Edge length: a positive rational or the distinguished value infinity.
/// Infinity absorbs addition and positive integer scaling.
class Length {
 public:
  Length() : finite_(true), value_(0) {}

  static Length infinity() {
    Length l;
    l.finite_ = false;
    l.value_ = Rat(0);
    return l;
  }

  static Length finite(const Rat& v) {
    Length l;
    l.finite_ = true;
    l.value_ = v;
    return l;
  }

  bool is_infinite() const { return !finite_; }
  bool is_finite() const { return finite_; }

  /// Finite value; only meaningful when is_finite().
  const Rat& value() const { return value_; }

  Length operator+(const Length& o) const {
    if (!finite_ || !o.finite_) return infinity();
    return finite(value_ + o.value_);
  }

  Length& operator+=(const Length& o) {
    *this = *this + o;
    return *this;
  }

  /// Scaling by a positive integer (stabilizer orders, edge degrees).
  Length scaled(long long k) const {
    if (!finite_) return infinity();
    return finite(value_ * Rat(k));
  }

  bool operator==(const Length& o) const {
    if (finite_ != o.finite_) return false;
    return finite_ ? value_ == o.value_ : true;
  }
  bool operator!=(const Length& o) const { return !(*this == o); }

  // Finite values order by value; infinity is greater than everything finite.
  bool operator<(const Length& o) const {
    if (finite_ && o.finite_) return value_ < o.value_;
    return finite_ && !o.finite_;
  }

  std::string str() const { return finite_ ? format_rational(value_) : "inf"; }

 private:
  bool finite_;
  Rat value_;
};

inline std::ostream& operator<<(std::ostream& os, const Length& l) {
  return os << l.str();
}

/// Parses a length token: "p/q", "p", or "inf".
inline Length parse_length(const std::string& text) {
  if (text == "inf") return Length::infinity();
  return Length::finite(parse_rational(text));
}

}  // namespace tropcover

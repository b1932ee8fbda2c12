#pragma once

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace loopon {

// Exact arithmetic in Q(sqrt(3)): values a + b*sqrt(3) with rational a, b.
struct Quad {
  using Rat = boost::multiprecision::cpp_rational;
  Rat a{0}, b{0};

  Quad() = default;
  Quad(int v) : a(v) {}
  Quad(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
  static Quad sqrt3() { return {0, 1}; }

  Quad& operator+=(const Quad& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  Quad& operator-=(const Quad& o) {
    a -= o.a;
    b -= o.b;
    return *this;
  }
  Quad& operator*=(const Quad& o) {
    Rat na = a * o.a + 3 * b * o.b;
    Rat nb = a * o.b + b * o.a;
    a = std::move(na);
    b = std::move(nb);
    return *this;
  }
  Quad& operator/=(const Quad& o) {
    // multiply by the conjugate; a^2 - 3 b^2 vanishes only at zero
    Rat den = o.a * o.a - 3 * o.b * o.b;
    Quad conj{o.a, -o.b};
    *this *= conj;
    a /= den;
    b /= den;
    return *this;
  }

  friend Quad operator+(Quad l, const Quad& r) { return l += r; }
  friend Quad operator-(Quad l, const Quad& r) { return l -= r; }
  friend Quad operator*(Quad l, const Quad& r) { return l *= r; }
  friend Quad operator/(Quad l, const Quad& r) { return l /= r; }
  friend Quad operator-(const Quad& v) { return Quad{-v.a, -v.b}; }

  friend bool operator==(const Quad& l, const Quad& r) {
    return l.a == r.a && l.b == r.b;
  }
  friend bool operator!=(const Quad& l, const Quad& r) { return !(l == r); }

  bool positive() const {
    // a + b*sqrt(3) > 0, decided with exact squares
    if (b == 0) return a > 0;
    if (a == 0) return b > 0;
    if (a > 0 && b > 0) return true;
    if (a < 0 && b < 0) return false;
    if (a > 0) return a * a > 3 * b * b;  // b < 0
    return a * a < 3 * b * b;             // a < 0, b > 0
  }
  friend bool operator<(const Quad& l, const Quad& r) {
    return (r - l).positive();
  }
  friend bool operator<=(const Quad& l, const Quad& r) { return !(r < l); }
  friend bool operator>(const Quad& l, const Quad& r) { return r < l; }
  friend bool operator>=(const Quad& l, const Quad& r) { return !(l < r); }

  explicit operator double() const {
    return (double)a + (double)b * std::sqrt(3.0);
  }
};

}  // namespace loopon

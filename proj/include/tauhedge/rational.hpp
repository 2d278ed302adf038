#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <stdexcept>
#include <string>

namespace tauhedge {

// Exact arbitrary-precision rational. No floating point anywhere in the core.
using Rat = boost::multiprecision::cpp_rational;

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& q);

// Extended rational: -inf < finite < +inf. Arithmetic mixing opposite
// infinities (or 0 * inf) is a hard error; such a product never occurs in a
// correct evaluation, so it surfaces logic bugs instead of hiding them.
class XRat {
 public:
  enum class Kind : unsigned char { NegInf, Finite, PosInf };

  XRat() : kind_(Kind::Finite), q_(0) {}
  XRat(Rat q) : kind_(Kind::Finite), q_(std::move(q)) {}
  XRat(int n) : kind_(Kind::Finite), q_(n) {}
  XRat(long n) : kind_(Kind::Finite), q_(n) {}

  static XRat pos_inf() { return XRat(Kind::PosInf); }
  static XRat neg_inf() { return XRat(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  const Rat& rat() const {
    if (!is_finite()) throw std::domain_error("XRat: non-finite value used where finite required");
    return q_;
  }

  int sign() const {
    switch (kind_) {
      case Kind::NegInf: return -1;
      case Kind::PosInf: return +1;
      default: return q_.sign();
    }
  }

  XRat operator-() const {
    switch (kind_) {
      case Kind::NegInf: return pos_inf();
      case Kind::PosInf: return neg_inf();
      default: return XRat(-q_);
    }
  }

  friend XRat operator+(const XRat& a, const XRat& b) {
    if (a.is_finite() && b.is_finite()) return XRat(a.q_ + b.q_);
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    if (a.kind_ == b.kind_) return a;
    throw std::domain_error("XRat: (+inf) + (-inf)");
  }
  friend XRat operator-(const XRat& a, const XRat& b) { return a + (-b); }

  friend XRat operator*(const XRat& a, const XRat& b) {
    if (a.is_finite() && b.is_finite()) return XRat(a.q_ * b.q_);
    int sa = a.sign(), sb = b.sign();
    if (sa == 0 || sb == 0) throw std::domain_error("XRat: 0 * inf");
    return sa * sb > 0 ? pos_inf() : neg_inf();
  }

  XRat& operator+=(const XRat& b) { *this = *this + b; return *this; }
  XRat& operator-=(const XRat& b) { *this = *this - b; return *this; }
  XRat& operator*=(const XRat& b) { *this = *this * b; return *this; }

  friend bool operator==(const XRat& a, const XRat& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.q_ == b.q_;
  }
  friend std::strong_ordering operator<=>(const XRat& a, const XRat& b) {
    auto rank = [](Kind k) { return k == Kind::NegInf ? 0 : (k == Kind::Finite ? 1 : 2); };
    if (rank(a.kind_) != rank(b.kind_)) return rank(a.kind_) <=> rank(b.kind_);
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.q_ < b.q_   ? std::strong_ordering::less
           : a.q_ > b.q_ ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
  }

  XRat positive_part() const { return *this > XRat(0) ? *this : XRat(0); }
  XRat negative_part() const { return *this < XRat(0) ? -*this : XRat(0); }

  std::string str() const;

 private:
  explicit XRat(Kind k) : kind_(k), q_(0) {}
  Kind kind_;
  Rat q_;
};

inline const XRat& max(const XRat& a, const XRat& b) { return a < b ? b : a; }
inline const XRat& min(const XRat& a, const XRat& b) { return b < a ? b : a; }

}  // namespace tauhedge

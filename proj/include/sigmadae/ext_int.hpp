#pragma once

#include <algorithm>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sigmadae {

/// Integer extended with a bottom element -inf.
///
/// Signature entries and signature-vector components live here. Adding a
/// finite shift to -inf stays at -inf, and -inf compares below every integer.
class ExtInt {
 public:
  constexpr ExtInt() = default;  // -inf
  constexpr ExtInt(int v) : finite_(true), value_(v) {}  // NOLINT(implicit)

  static constexpr ExtInt neg_inf() { return ExtInt(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_neg_inf() const { return !finite_; }

  int value() const {
    if (!finite_) throw std::logic_error("ExtInt: value() of -inf");
    return value_;
  }

  constexpr ExtInt operator+(int k) const {
    return finite_ ? ExtInt(value_ + k) : ExtInt();
  }

  friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const ExtInt& a,
                                                    const ExtInt& b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }

  friend constexpr ExtInt max(const ExtInt& a, const ExtInt& b) {
    return a < b ? b : a;
  }
  friend constexpr ExtInt min(const ExtInt& a, const ExtInt& b) {
    return b < a ? b : a;
  }

  std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

  friend std::ostream& operator<<(std::ostream& os, const ExtInt& e) {
    return os << e.str();
  }

 private:
  bool finite_ = false;
  int value_ = 0;
};

/// Integer extended with a top element +inf. Used for variable offsets,
/// which are minima over possibly-empty sets.
class UpperInt {
 public:
  constexpr UpperInt() = default;  // +inf
  constexpr UpperInt(int v) : finite_(true), value_(v) {}  // NOLINT(implicit)

  static constexpr UpperInt inf() { return UpperInt(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_inf() const { return !finite_; }

  int value() const {
    if (!finite_) throw std::logic_error("UpperInt: value() of +inf");
    return value_;
  }

  constexpr UpperInt operator-(int k) const {
    return finite_ ? UpperInt(value_ - k) : UpperInt();
  }

  friend constexpr bool operator==(const UpperInt& a, const UpperInt& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const UpperInt& a,
                                                    const UpperInt& b) {
    if (!a.finite_ || !b.finite_) return b.finite_ <=> a.finite_;
    return a.value_ <=> b.value_;
  }

  friend constexpr UpperInt min(const UpperInt& a, const UpperInt& b) {
    return b < a ? b : a;
  }

  std::string str() const { return finite_ ? std::to_string(value_) : "inf"; }

  friend std::ostream& operator<<(std::ostream& os, const UpperInt& e) {
    return os << e.str();
  }

 private:
  bool finite_ = false;
  int value_ = 0;
};

}  // namespace sigmadae

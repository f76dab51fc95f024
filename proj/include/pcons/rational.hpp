#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pcons {

using int128 = __int128;
using uint128 = unsigned __int128;

std::string to_string(int128 value);
std::string to_string(uint128 value);

// Exact rational over 128-bit integers. Invariants: den > 0, gcd(num, den) == 1,
// so equality is plain member comparison. Magnitudes here stay far below the
// 128-bit range (numerators are distance totals, denominators are set sizes),
// hence no overflow guards on the arithmetic.
class Rat {
 public:
  Rat() = default;
  Rat(int128 num, int128 den = 1) : num_(num), den_(den) { normalize(); }

  int128 num() const { return num_; }
  int128 den() const { return den_; }

  bool is_integer() const { return den_ == 1; }

  Rat operator+(const Rat& o) const { return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
  Rat operator-(const Rat& o) const { return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
  Rat operator*(const Rat& o) const { return Rat(num_ * o.num_, den_ * o.den_); }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return Rat(num_ * o.den_, den_ * o.num_);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Rat& o) const { return num_ * o.den_ <= o.num_ * den_; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "7/4", or "7" when the value is integral.
  std::string str() const {
    std::string s = to_string(num_);
    if (den_ != 1) s += "/" + to_string(den_);
    return s;
  }

 private:
  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    int128 a = num_ < 0 ? -num_ : num_;
    int128 b = den_;
    while (b != 0) {
      int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num_ /= a;
      den_ /= a;
    }
    if (num_ == 0) den_ = 1;
  }

  int128 num_ = 0;
  int128 den_ = 1;
};

inline std::string to_string(uint128 value) {
  if (value == 0) return "0";
  std::string s;
  while (value != 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return s;
}

inline std::string to_string(int128 value) {
  if (value < 0) return "-" + to_string(static_cast<uint128>(-value));
  return to_string(static_cast<uint128>(value));
}

}  // namespace pcons

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cencon/errors.hpp"

namespace cencon {

/// Minimal arbitrary-precision unsigned integer, base 1e9 limbs,
/// little-endian. Supports exactly what the counting bounds need:
/// multiplication, exponentiation, decimal output.
class BigUint {
 public:
  BigUint() : limbs_{0} {}

  explicit BigUint(std::uint64_t v) {
    do {
      limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
      v /= kBase;
    } while (v > 0);
  }

  BigUint operator*(const BigUint& rhs) const {
    std::vector<std::uint64_t> acc(limbs_.size() + rhs.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      if (limbs_[i] == 0) continue;
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
        std::uint64_t cur = acc[i + j] + static_cast<std::uint64_t>(limbs_[i]) * rhs.limbs_[j] + carry;
        acc[i + j] = cur % kBase;
        carry = cur / kBase;
      }
      std::size_t k = i + rhs.limbs_.size();
      while (carry > 0) {
        std::uint64_t cur = acc[k] + carry;
        acc[k] = cur % kBase;
        carry = cur / kBase;
        ++k;
      }
    }
    BigUint out;
    out.limbs_.assign(acc.begin(), acc.end());
    out.trim();
    return out;
  }

  BigUint& operator*=(const BigUint& rhs) { return *this = *this * rhs; }

  /// Binary exponentiation.
  static BigUint pow(BigUint base, std::uint64_t e) {
    BigUint result(1);
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Plain repeated multiplication; kept as an independent route so the
  /// two can be cross-checked.
  static BigUint pow_by_multiplication(const BigUint& base, std::uint64_t e) {
    BigUint result(1);
    for (std::uint64_t i = 0; i < e; ++i) result *= base;
    return result;
  }

  bool operator==(const BigUint& rhs) const { return limbs_ == rhs.limbs_; }
  bool operator!=(const BigUint& rhs) const { return !(*this == rhs); }

  bool operator<(const BigUint& rhs) const {
    if (limbs_.size() != rhs.limbs_.size()) return limbs_.size() < rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;)
      if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] < rhs.limbs_[i];
    return false;
  }
  bool operator<=(const BigUint& rhs) const { return *this < rhs || *this == rhs; }

  /// Plain decimal string, no separators, no scientific notation.
  std::string to_string() const {
    std::string s = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs_[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

 private:
  static constexpr std::uint64_t kBase = 1000000000ULL;

  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace cencon

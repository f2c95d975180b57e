#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrgraph {

/// Arbitrary-precision signed integer, sized for row-major graph encodings
/// (M*M bits overflow machine words from six nodes up). Supports exactly
/// what the metrics need: build-from-bits, add, subtract, compare, and
/// decimal printing.
class BigInt {
 public:
  BigInt() = default;

  BigInt(long long value) {  // NOLINT: implicit by design
    neg_ = value < 0;
    unsigned long long m =
        neg_ ? ~static_cast<unsigned long long>(value) + 1ULL : static_cast<unsigned long long>(value);
    while (m != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
  }

  /// *this = *this * 2 + bit. Only meaningful for non-negative values.
  void append_bit(int bit) {
    if (neg_) throw std::invalid_argument("append_bit on negative value");
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    std::uint32_t carry = static_cast<std::uint32_t>(bit);
    for (auto& limb : limbs_) {
      const std::uint64_t w = (static_cast<std::uint64_t>(limb) << 1) | carry;
      limb = static_cast<std::uint32_t>(w & 0xffffffffULL);
      carry = static_cast<std::uint32_t>(w >> 32);
    }
    if (carry) limbs_.push_back(carry);
  }

  bool is_zero() const { return limbs_.empty(); }
  bool negative() const { return neg_; }

  BigInt negated() const {
    BigInt r = *this;
    if (!r.is_zero()) r.neg_ = !r.neg_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.neg_ == b.neg_) {
      BigInt r;
      r.limbs_ = add_mag(a.limbs_, b.limbs_);
      r.neg_ = a.neg_ && !r.limbs_.empty();
      return r;
    }
    return a - b.negated();
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.neg_ != b.neg_) {  // a - (-x) = a + x with a's sign
      r.limbs_ = add_mag(a.limbs_, b.limbs_);
      r.neg_ = a.neg_ && !r.limbs_.empty();
      return r;
    }
    const int c = cmp_mag(a.limbs_, b.limbs_);
    if (c == 0) return r;
    if (c > 0) {
      r.limbs_ = sub_mag(a.limbs_, b.limbs_);
      r.neg_ = a.neg_;
    } else {
      r.limbs_ = sub_mag(b.limbs_, a.limbs_);
      r.neg_ = !a.neg_;
    }
    if (r.limbs_.empty()) r.neg_ = false;
    return r;
  }

  bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }

  bool operator<(const BigInt& o) const {
    if (neg_ != o.neg_) return neg_;
    const int c = cmp_mag(limbs_, o.limbs_);
    return neg_ ? c > 0 : c < 0;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<std::uint32_t> work(limbs_);
    std::string digits;
    while (!work.empty()) {
      // divide by 1e9, collecting the remainder
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        const std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
        rem = cur % 1000000000ULL;
      }
      while (!work.empty() && work.back() == 0) work.pop_back();
      for (int d = 0; d < 9; ++d) {
        digits.push_back(static_cast<char>('0' + rem % 10));
        rem /= 10;
      }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out;
    if (neg_) out.push_back('-');
    out.append(digits.rbegin(), digits.rend());
    return out;
  }

 private:
  static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<std::uint32_t> r;
    r.reserve(n + 1);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t s = carry;
      if (i < a.size()) s += a[i];
      if (i < b.size()) s += b[i];
      r.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
      carry = s >> 32;
    }
    if (carry) r.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }

  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r;
    r.reserve(a.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
      if (d < 0) {
        d += 1LL << 32;
        borrow = 1;
      } else {
        borrow = 0;
      }
      r.push_back(static_cast<std::uint32_t>(d));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  std::vector<std::uint32_t> limbs_;  // base 2^32, little-endian, trimmed
  bool neg_ = false;                  // never set for zero
};

}  // namespace mrgraph

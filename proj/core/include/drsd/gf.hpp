#pragma once
#include <cstdint>
#include <vector>

namespace drsd {

/// Binary extension field GF(2^m), m in [2, 14], backed by log/antilog tables.
/// Elements are m-bit masks; alpha is the class of x modulo the primitive
/// polynomial. Construction verifies primitivity by checking that alpha has
/// multiplicative order 2^m - 1.
class GaloisField {
 public:
  /// primitive_poly is the full bit mask including the x^m term;
  /// 0 selects a standard default for the given m.
  explicit GaloisField(int m, uint32_t primitive_poly = 0);

  int m() const { return m_; }
  /// Multiplicative group order, 2^m - 1.
  int order() const { return n_; }
  uint32_t primitive_poly() const { return poly_; }

  uint16_t mul(uint16_t a, uint16_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  uint16_t div(uint16_t a, uint16_t b) const {
    // b must be nonzero
    if (a == 0) return 0;
    return exp_[log_[a] - log_[b] + n_];
  }
  uint16_t inv(uint16_t a) const { return exp_[n_ - log_[a]]; }

  /// alpha^e for any integer e (reduced mod 2^m - 1).
  uint16_t alpha_pow(int64_t e) const;

  /// Discrete log base alpha; -1 for the zero element.
  int log(uint16_t a) const { return log_[a]; }

  static uint32_t default_primitive_poly(int m);

 private:
  int m_ = 0;
  int n_ = 0;  // 2^m - 1
  uint32_t poly_ = 0;
  std::vector<uint16_t> exp_;  // size 2n so products index without reduction
  std::vector<int16_t> log_;   // size 2^m
};

}  // namespace drsd

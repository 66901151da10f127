#include "drsd/gf.hpp"

#include <stdexcept>

#include "drsd/util.hpp"

namespace drsd {

uint32_t GaloisField::default_primitive_poly(int m) {
  // Conventional primitive polynomials; m=8 is x^8+x^4+x^3+x^2+1 (0x11d).
  switch (m) {
    case 2: return 0x7;
    case 3: return 0xb;
    case 4: return 0x13;
    case 5: return 0x25;
    case 6: return 0x43;
    case 7: return 0x89;
    case 8: return 0x11d;
    case 9: return 0x211;
    case 10: return 0x409;
    case 11: return 0x805;
    case 12: return 0x1053;
    case 13: return 0x201b;
    case 14: return 0x4443;
    default: return 0;
  }
}

GaloisField::GaloisField(int m, uint32_t primitive_poly) : m_(m) {
  if (m < 2 || m > 14) throw std::invalid_argument("GaloisField: m out of range [2,14]");
  poly_ = primitive_poly ? primitive_poly : default_primitive_poly(m);
  if (poly_ == 0 || (poly_ >> m) != 1u)
    throw std::invalid_argument("GaloisField: polynomial degree must equal m");
  n_ = (1 << m) - 1;
  exp_.assign(2 * n_, 0);
  log_.assign(size_t(1) << m, -1);

  uint32_t x = 1;
  for (int i = 0; i < n_; ++i) {
    if (i > 0 && x == 1)
      throw std::invalid_argument("GaloisField: polynomial is not primitive");
    exp_[i] = static_cast<uint16_t>(x);
    exp_[i + n_] = exp_[i];
    log_[x] = static_cast<int16_t>(i);
    x <<= 1;
    if (x >> m) x ^= poly_;
  }
  if (x != 1) throw std::invalid_argument("GaloisField: polynomial is not primitive");
}

uint16_t GaloisField::alpha_pow(int64_t e) const {
  return exp_[static_cast<size_t>(pos_mod(e, n_))];
}

}  // namespace drsd

#include "drsd/bch.hpp"

#include <algorithm>
#include <stdexcept>

namespace drsd {

std::vector<uint8_t> bch_generator_poly(const GaloisField& gf, int t) {
  const int n = gf.order();
  // Cyclotomic cosets of 1..2t mod 2^m-1; one minimal polynomial per coset.
  std::vector<uint8_t> seen(n + 1, 0);
  std::vector<uint8_t> gen{1};  // product accumulator, gen[i] = coeff of x^i
  for (int s = 1; s <= 2 * t; ++s) {
    if (seen[s]) continue;
    // Collect the coset {s, 2s, 4s, ...} and its roots alpha^j.
    std::vector<int> coset;
    int j = s;
    do {
      seen[j] = 1;
      coset.push_back(j);
      j = (2 * j) % n;
    } while (j != s);
    // Minimal polynomial = prod (x - alpha^j), computed over GF(2^m);
    // the result has all coefficients in {0,1}.
    std::vector<uint16_t> mp{1};
    for (int e : coset) {
      std::vector<uint16_t> next(mp.size() + 1, 0);
      uint16_t root = gf.alpha_pow(e);
      for (size_t i = 0; i < mp.size(); ++i) {
        next[i + 1] ^= mp[i];
        next[i] ^= gf.mul(mp[i], root);
      }
      mp = std::move(next);
    }
    for (uint16_t c : mp)
      if (c > 1) throw std::logic_error("bch_generator_poly: minimal polynomial not binary");
    // Multiply into the generator (binary polynomial product).
    std::vector<uint8_t> prod(gen.size() + mp.size() - 1, 0);
    for (size_t a = 0; a < gen.size(); ++a) {
      if (!gen[a]) continue;
      for (size_t b = 0; b < mp.size(); ++b) prod[a + b] ^= static_cast<uint8_t>(mp[b]);
    }
    gen = std::move(prod);
  }
  return gen;
}

BchCode::BchCode(GaloisField field, int t, int shortening, bool extended)
    : gf_(std::move(field)), t_(t), shortening_(shortening), extended_(extended) {
  if (t < 1 || t > 8) throw std::invalid_argument("BchCode: t out of range [1,8]");
  nn_ = gf_.order();
  gen_ = bch_generator_poly(gf_, t);
  const int p = static_cast<int>(gen_.size()) - 1;
  n_cyc_ = nn_ - shortening_;
  k_ = nn_ - p - shortening_;
  if (shortening < 0 || k_ <= 0)
    throw std::invalid_argument("BchCode: shortening leaves no information bits");
  n_ = n_cyc_ + (extended_ ? 1 : 0);

  // Position j of the cyclic part carries the coefficient of
  // x^{nn-1-shortening-j}; precompute alpha^{i*e_j} for syndromes S_1..S_2t.
  syn_tab_.assign(static_cast<size_t>(2 * t_) * n_cyc_, 0);
  for (int i = 1; i <= 2 * t_; ++i) {
    for (int j = 0; j < n_cyc_; ++j) {
      int64_t e = nn_ - 1 - shortening_ - j;
      syn_tab_[static_cast<size_t>(i - 1) * n_cyc_ + j] = gf_.alpha_pow(int64_t(i) * e);
    }
  }
}

void BchCode::encode(std::span<const uint8_t> info, std::span<uint8_t> out) const {
  if (static_cast<int>(info.size()) != k_) throw std::invalid_argument("BchCode::encode: bad info length");
  if (static_cast<int>(out.size()) != n_) throw std::invalid_argument("BchCode::encode: bad output length");
  const int p = parity_bits();
  // LFSR division of x^p * I(x) by g(x); info[0] is the highest-degree coefficient.
  std::vector<uint8_t> reg(p, 0);
  for (int j = 0; j < k_; ++j) {
    uint8_t fb = static_cast<uint8_t>((info[j] & 1u) ^ reg[p - 1]);
    for (int i = p - 1; i > 0; --i) reg[i] = reg[i - 1] ^ (fb & gen_[i]);
    reg[0] = fb & gen_[0];
  }
  for (int j = 0; j < k_; ++j) out[j] = info[j] & 1u;
  for (int i = 0; i < p; ++i) out[k_ + i] = reg[p - 1 - i];
  if (extended_) {
    uint8_t acc = 0;
    for (int j = 0; j < n_ - 1; ++j) acc ^= out[j];
    out[n_ - 1] = acc;
  }
}

std::vector<uint8_t> BchCode::encode(std::span<const uint8_t> info) const {
  std::vector<uint8_t> out(n_);
  encode(info, out);
  return out;
}

int BchCode::overall_parity(std::span<const uint8_t> word) const {
  uint8_t acc = 0;
  for (uint8_t b : word) acc ^= (b & 1u);
  return acc;
}

int BchCode::syndromes(std::span<const uint8_t> word, std::span<uint16_t> s) const {
  int nonzero = 0;
  for (int i = 0; i < 2 * t_; ++i) {
    const uint16_t* tab = &syn_tab_[static_cast<size_t>(i) * n_cyc_];
    uint16_t acc = 0;
    for (int j = 0; j < n_cyc_; ++j)
      if (word[j] & 1u) acc ^= tab[j];
    s[i] = acc;
    nonzero |= acc;
  }
  return nonzero;
}

BddOutcome BchCode::decode(std::span<const uint8_t> word) const {
  if (static_cast<int>(word.size()) != n_) throw std::invalid_argument("BchCode::decode: bad word length");
  BddOutcome out;
  std::array<uint16_t, 16> synd{};
  std::span<uint16_t> s(synd.data(), 2 * t_);
  const int any = syndromes(word, s);
  const int par = extended_ ? overall_parity(word) : 0;

  if (!any) {
    if (!extended_ || par == 0) {
      out.status = BddOutcome::Status::kCodeword;
      return out;
    }
    // Clean cyclic part, odd overall weight: the extension bit itself is off.
    out.status = BddOutcome::Status::kCorrected;
    out.flips[out.num_flips++] = static_cast<uint16_t>(n_ - 1);
    return out;
  }

  // Berlekamp-Massey for the error locator sigma(x). Intermediate degrees
  // can reach 2t, hence the array size.
  std::array<uint16_t, 17> c{}, b{}, tmp{};
  c[0] = 1;
  b[0] = 1;
  int l = 0, m = 1;
  uint16_t bd = 1;
  for (int step = 0; step < 2 * t_; ++step) {
    uint16_t d = s[step];
    for (int i = 1; i <= l; ++i) d ^= gf_.mul(c[i], s[step - i]);
    if (d == 0) {
      ++m;
      continue;
    }
    uint16_t coef = gf_.div(d, bd);
    if (2 * l <= step) {
      tmp = c;
      for (int i = 0; i + m <= 2 * t_; ++i) c[i + m] ^= gf_.mul(coef, b[i]);
      l = step + 1 - l;
      b = tmp;
      bd = d;
      m = 1;
    } else {
      for (int i = 0; i + m <= 2 * t_; ++i) c[i + m] ^= gf_.mul(coef, b[i]);
      ++m;
    }
  }
  if (l > t_ || c[l] == 0) return out;  // beyond radius t

  // Chien search over the whole field; a root alpha^i locates an error at
  // exponent e = nn - i (mod nn), valid only within the unshortened span.
  int found = 0;
  std::array<uint16_t, 12> flips{};
  int nflips = 0;
  std::array<uint16_t, 9> reg{};  // reg[d] = c[d] * alpha^{i*d}
  for (int d = 1; d <= l; ++d) reg[d] = c[d];
  for (int i = 0; i < nn_; ++i) {
    uint16_t v = 1;
    for (int d = 1; d <= l; ++d) v ^= reg[d];
    if (v == 0) {
      ++found;
      if (found > l) return out;
      int e = (nn_ - i) % nn_;
      int pos = nn_ - 1 - shortening_ - e;
      if (pos < 0 || pos >= n_cyc_) return out;  // error in the shortened prefix
      flips[nflips++] = static_cast<uint16_t>(pos);
    }
    for (int d = 1; d <= l; ++d) reg[d] = gf_.mul(reg[d], gf_.alpha_pow(d));
  }
  if (found != l) return out;

  // Verify: syndromes of the corrected word must vanish.
  for (int i = 0; i < 2 * t_; ++i) {
    uint16_t acc = s[i];
    for (int f = 0; f < nflips; ++f) acc ^= syn_tab_[static_cast<size_t>(i) * n_cyc_ + flips[f]];
    if (acc != 0) return out;
  }

  if (extended_ && ((nflips & 1) != par)) {
    // Flip count parity disagrees with the overall parity check: the
    // extension bit is also in error.
    flips[nflips++] = static_cast<uint16_t>(n_ - 1);
  }
  out.status = BddOutcome::Status::kCorrected;
  out.num_flips = static_cast<uint8_t>(nflips);
  out.flips = flips;
  return out;
}

}  // namespace drsd

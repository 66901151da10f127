#pragma once
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "drsd/gf.hpp"

namespace drsd {

/// Result of bounded-distance decoding one component word.
struct BddOutcome {
  enum class Status : uint8_t {
    kCodeword,   // zero syndrome (and even weight if extended)
    kCorrected,  // within radius t (cyclic), flips lists the corrected bits
    kFailure,    // no codeword within the decoding region
  };
  Status status = Status::kFailure;
  uint8_t num_flips = 0;
  std::array<uint16_t, 12> flips{};  // positions, valid up to num_flips

  bool ok() const { return status != Status::kFailure; }
  std::span<const uint16_t> flip_positions() const { return {flips.data(), num_flips}; }
};

/// Binary BCH component code over GF(2^m), systematic, optionally shortened
/// and/or singly extended by an overall parity bit.
///
/// Codeword layout: positions [0, k) carry information, positions [k, k+p)
/// the p = deg(g) parity bits (lowest-degree coefficients last), and, if
/// extended, position n-1 the overall parity bit. Shortening removes the
/// leading information positions of the parent cyclic code.
///
/// decode() implements strict bounded-distance semantics on the cyclic part:
/// it corrects up to t errors there and returns kFailure otherwise; for
/// extended codes the overall parity additionally locates one error on top
/// (at most t cyclic flips plus the extension bit). Decoding is reentrant
/// and the object is immutable after construction.
class BchCode {
 public:
  BchCode(GaloisField field, int t, int shortening = 0, bool extended = false);

  int n() const { return n_; }
  int k() const { return k_; }
  int t() const { return t_; }
  int shortening() const { return shortening_; }
  bool extended() const { return extended_; }
  int parity_bits() const { return static_cast<int>(gen_.size()) - 1; }
  const GaloisField& field() const { return gf_; }
  /// Generator polynomial coefficients, gen()[i] = coefficient of x^i.
  const std::vector<uint8_t>& generator() const { return gen_; }

  /// Systematic encoding; info.size() == k, out.size() == n. Bits are 0/1 bytes.
  void encode(std::span<const uint8_t> info, std::span<uint8_t> out) const;
  std::vector<uint8_t> encode(std::span<const uint8_t> info) const;

  BddOutcome decode(std::span<const uint8_t> word) const;

  /// XOR of all n bits; zero for every codeword of an extended code.
  int overall_parity(std::span<const uint8_t> word) const;

 private:
  int syndromes(std::span<const uint8_t> word, std::span<uint16_t> s) const;

  GaloisField gf_;
  int t_;
  int shortening_;
  bool extended_;
  int nn_;      // parent cyclic length 2^m - 1
  int n_cyc_;   // nn_ - shortening, codeword length without extension bit
  int n_, k_;
  std::vector<uint8_t> gen_;
  std::vector<uint16_t> syn_tab_;  // [2t][n_cyc] powers alpha^{(i+1)*e_j}
};

/// Product of the minimal polynomials of alpha^1..alpha^{2t} (each counted
/// once); coefficients over GF(2), index = degree.
std::vector<uint8_t> bch_generator_poly(const GaloisField& gf, int t);

}  // namespace drsd

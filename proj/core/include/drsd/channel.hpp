#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "drsd/util.hpp"

namespace drsd {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// BI-AWGN channel parameters. Bit 0 maps to +amplitude, bit 1 to
/// -amplitude; real-valued noise has variance sigma_n^2 = (2 Es/N0)^-1.
/// QPSK transmission is modeled as two independent BPSK rails with
/// amplitude 1/sqrt(2).
struct ChannelSpec {
  double amplitude = 1.0;
  double noise_variance = 0.5;

  double sigma() const { return std::sqrt(noise_variance); }
  /// Pre-FEC hard-decision error probability Q(a / sigma).
  double raw_ber() const { return q_func(amplitude / sigma()); }

  static ChannelSpec from_esn0_db(double esn0_db, double amplitude) {
    double esn0 = std::pow(10.0, esn0_db / 10.0);
    return {amplitude, 1.0 / (2.0 * esn0)};
  }
};

/// Distribution of the received magnitude |R| under equiprobable BPSK:
/// the density is the sum of the two conditional normal densities folded
/// onto r >= 0.
class MagnitudeDistribution {
 public:
  explicit MagnitudeDistribution(const ChannelSpec& spec)
      : a_(spec.amplitude), sigma_(spec.sigma()) {
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_) || !(a_ > 0.0))
      throw_invalid();
  }

  double pdf(double r) const;
  double cdf(double r) const;
  /// Inverse CDF on [0, 1); bisection to 1e-12 absolute tolerance.
  double inv_cdf(double p) const;

  double amplitude() const { return a_; }
  double sigma() const { return sigma_; }

 private:
  [[noreturn]] static void throw_invalid();
  double a_, sigma_;
};

/// Seeded channel; splits each received value into hard decision and
/// magnitude for the DRS initializer.
class BiAwgnChannel {
 public:
  BiAwgnChannel(const ChannelSpec& spec, uint64_t seed, bool noise_enabled = true)
      : spec_(spec), rng_(seed), noise_(noise_enabled) {}

  /// bits, hard and magnitude must have equal sizes.
  void transmit(std::span<const uint8_t> bits, std::span<uint8_t> hard,
                std::span<float> magnitude);

  const ChannelSpec& spec() const { return spec_; }

 private:
  ChannelSpec spec_;
  Rng rng_;
  bool noise_;
};

/// Axis conversion owned by the harness: Es/N0 = Eb/N0 + 10 log10(R * rails),
/// with rails = BPSK symbols carrying one information-bearing channel bit
/// (1 for BPSK, 2 for the QPSK model).
inline double ebn0_to_esn0_db(double ebn0_db, double rate, int rails) {
  return ebn0_db + 10.0 * std::log10(rate * rails);
}
inline double esn0_to_ebn0_db(double esn0_db, double rate, int rails) {
  return esn0_db - 10.0 * std::log10(rate * rails);
}

}  // namespace drsd

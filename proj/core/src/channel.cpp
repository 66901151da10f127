#include "drsd/channel.hpp"

#include <stdexcept>

namespace drsd {

void MagnitudeDistribution::throw_invalid() {
  throw std::invalid_argument("MagnitudeDistribution: need finite variance > 0 and amplitude > 0");
}

double MagnitudeDistribution::pdf(double r) const {
  if (r < 0.0) throw std::invalid_argument("MagnitudeDistribution::pdf: r < 0");
  const double inv = 1.0 / (sigma_ * std::sqrt(2.0 * M_PI));
  double zp = (r - a_) / sigma_;
  double zm = (r + a_) / sigma_;
  return inv * (std::exp(-0.5 * zp * zp) + std::exp(-0.5 * zm * zm));
}

double MagnitudeDistribution::cdf(double r) const {
  if (r < 0.0) throw std::invalid_argument("MagnitudeDistribution::cdf: r < 0");
  return normal_cdf((r - a_) / sigma_) + normal_cdf((r + a_) / sigma_) - 1.0;
}

double MagnitudeDistribution::inv_cdf(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) throw std::invalid_argument("MagnitudeDistribution::inv_cdf: p must be < 1");
  double lo = 0.0, hi = a_ + 8.0 * sigma_;
  while (cdf(hi) < p) hi *= 2.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void BiAwgnChannel::transmit(std::span<const uint8_t> bits, std::span<uint8_t> hard,
                             std::span<float> magnitude) {
  const double a = spec_.amplitude;
  const double sigma = spec_.sigma();
  for (size_t i = 0; i < bits.size(); ++i) {
    double v = (bits[i] ? -a : a);
    if (noise_) v += sigma * rng_.next_normal();
    hard[i] = v < 0.0 ? 1 : 0;
    magnitude[i] = static_cast<float>(std::fabs(v));
  }
}

}  // namespace drsd

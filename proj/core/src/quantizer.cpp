#include "drsd/quantizer.hpp"

#include <stdexcept>

namespace drsd {

void DrsParams::validate() const {
  if (i_s >= i_e) throw std::invalid_argument("DrsParams: need i_s < i_e");
  if (i_s < -128 || i_e > 127) throw std::invalid_argument("DrsParams: DRS range must fit int8");
  if (j_max < 1 || j_max > 4) throw std::invalid_argument("DrsParams: j_max must be in 1..4");
  if (erasure_threshold < 0.0) throw std::invalid_argument("DrsParams: negative erasure threshold");
  if (quantizer == Quantizer::kCapped && !(t_quan_max > 0.0))
    throw std::invalid_argument("DrsParams: t_quan_max must be positive");
}

std::vector<double> equal_mass_thresholds(int i_s, int i_e, const MagnitudeDistribution& dist) {
  if (i_s >= i_e) throw std::invalid_argument("equal_mass_thresholds: need i_s < i_e");
  const int cells = i_e - i_s + 1;
  std::vector<double> t(cells);
  for (int k = 0; k < cells; ++k)
    t[k] = std::max(0.0, dist.inv_cdf(static_cast<double>(k) / cells));
  return t;
}

std::vector<double> capped_thresholds(int i_s, int i_e, double t_quan_max,
                                      const MagnitudeDistribution& dist) {
  if (i_s >= i_e) throw std::invalid_argument("capped_thresholds: need i_s < i_e");
  if (!(t_quan_max > 0.0)) throw std::invalid_argument("capped_thresholds: t_quan_max must be positive");
  const int cells = i_e - i_s + 1;
  const double mass = dist.cdf(t_quan_max);
  std::vector<double> t(cells);
  for (int k = 0; k < cells; ++k)
    t[k] = std::max(0.0, dist.inv_cdf(static_cast<double>(k) / (cells - 1) * mass));
  // Guard the top cell against inversion round-off: it must start at
  // t_quan_max exactly so every larger magnitude maps to i_e.
  t[cells - 1] = t_quan_max;
  return t;
}

DrsQuantizer::DrsQuantizer(const DrsParams& params, const MagnitudeDistribution& dist)
    : params_(params) {
  params_.validate();
  thresholds_ = params.quantizer == DrsParams::Quantizer::kEqualMass
                    ? equal_mass_thresholds(params.i_s, params.i_e, dist)
                    : capped_thresholds(params.i_s, params.i_e, params.t_quan_max, dist);
}

}  // namespace drsd

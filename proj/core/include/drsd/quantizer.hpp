#pragma once
#include <cstdint>
#include <vector>

#include "drsd/channel.hpp"

namespace drsd {

/// Tunable knobs of the soft-aided component decoder: DRS range, erasure
/// threshold T (channel-magnitude units), erasure fill-pair count limit,
/// and the quantizer variant.
struct DrsParams {
  enum class Quantizer : uint8_t {
    kEqualMass,  // every DRS cell receives the same probability mass
    kCapped,     // equal mass below t_quan_max; larger magnitudes pin to i_e
  };

  int i_s = 0;
  int i_e = 31;
  double erasure_threshold = 0.0;  // T; a magnitude r is erased iff r < T
  int j_max = 1;                   // complementary fill-pair budget, 1..4
  Quantizer quantizer = Quantizer::kEqualMass;
  double t_quan_max = 0.9;         // only used by kCapped

  void validate() const;
};

/// Thresholds t_{i_s}..t_{i_e} placing equal probability mass of |R| in
/// every cell: t_k = max{0, F^-1((k - i_s) / (i_e - i_s + 1))}.
std::vector<double> equal_mass_thresholds(int i_s, int i_e, const MagnitudeDistribution& dist);

/// Capped variant: t_k = max{0, F^-1((k - i_s)/(i_e - i_s) * F(t_quan_max))},
/// so cell i_e starts exactly at t_quan_max.
std::vector<double> capped_thresholds(int i_s, int i_e, double t_quan_max,
                                      const MagnitudeDistribution& dist);

/// Maps received magnitudes to initial DRS values and erasure decisions.
/// A magnitude r gets DRS d when t_d <= r < t_{d+1}, and i_e when
/// r >= t_{i_e}; it is erased iff r < T (r == T is not an erasure).
class DrsQuantizer {
 public:
  DrsQuantizer(const DrsParams& params, const MagnitudeDistribution& dist);

  int8_t drs(double r) const {
    // thresholds_[0] == 0 <= r always
    size_t lo = 0, hi = thresholds_.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      (r >= thresholds_[mid] ? lo : hi) = mid;
    }
    return static_cast<int8_t>(params_.i_s + static_cast<int>(lo));
  }
  bool erased(double r) const { return r < params_.erasure_threshold; }

  const DrsParams& params() const { return params_; }
  const std::vector<double>& thresholds() const { return thresholds_; }

 private:
  DrsParams params_;
  std::vector<double> thresholds_;
};

}  // namespace drsd

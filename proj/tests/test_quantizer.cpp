#include <doctest.h>

#include <vector>

#include "drsd/channel.hpp"
#include "drsd/quantizer.hpp"

using namespace drsd;

namespace {

// Independent inversion for the oracle: plain interval halving on the
// closed-form two-Gaussian CDF written out longhand.
double bisect_quantile(double p, double a, double sigma) {
  double lo = 0.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = normal_cdf((mid - a) / sigma) + normal_cdf((mid + a) / sigma) - 1.0;
    (f < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("equal-mass thresholds: first threshold is zero, cells carry 1/32") {
  ChannelSpec spec{1.0, 0.49};
  MagnitudeDistribution dist(spec);
  auto t = equal_mass_thresholds(0, 31, dist);
  REQUIRE(t.size() == 32);
  CHECK(t[0] == 0.0);
  for (int k = 1; k < 32; ++k) CHECK(t[k] > t[k - 1]);
  // Every cell [t_k, t_{k+1}) holds mass 1/32, including the open top cell.
  for (int k = 0; k < 31; ++k)
    CHECK(dist.cdf(t[k + 1]) - dist.cdf(t[k]) == doctest::Approx(1.0 / 32).epsilon(1e-7));
  CHECK(1.0 - dist.cdf(t[31]) == doctest::Approx(1.0 / 32).epsilon(1e-7));

  // Spec'd midpoint: cell 16 of 32 starts at the median of |R|.
  CHECK(t[16] == doctest::Approx(bisect_quantile(16.0 / 32, 1.0, 0.7)).epsilon(1e-9));
}

TEST_CASE("capped thresholds: top cell starts exactly at t_quan_max") {
  MagnitudeDistribution dist(ChannelSpec{1.0, 0.25});
  auto t = capped_thresholds(0, 31, 0.9, dist);
  REQUIRE(t.size() == 32);
  CHECK(t[0] == 0.0);
  CHECK(t[31] == 0.9);
  double mass = dist.cdf(0.9);
  for (int k = 1; k < 32; ++k)
    CHECK(dist.cdf(t[k]) == doctest::Approx(k / 31.0 * mass).epsilon(1e-7));
}

TEST_CASE("quantizer assignment boundaries") {
  MagnitudeDistribution dist(ChannelSpec{1.0, 0.25});
  DrsParams params;
  params.i_s = 0;
  params.i_e = 31;
  params.erasure_threshold = 0.2;
  DrsQuantizer q(params, dist);
  const auto& t = q.thresholds();

  CHECK(q.drs(0.0) == 0);
  CHECK(q.erased(0.0));
  CHECK(q.erased(0.19999));
  CHECK(!q.erased(0.2));  // boundary is not an erasure
  CHECK(q.drs(t[31]) == 31);
  CHECK(q.drs(t[31] + 5.0) == 31);
  for (int k = 0; k < 31; ++k) {
    CHECK(q.drs(t[k]) == k);  // inclusive lower edge
    CHECK(q.drs(0.5 * (t[k] + t[k + 1])) == k);
  }
}

TEST_CASE("capped quantizer pins every magnitude above t_quan_max to i_e") {
  auto spec = ChannelSpec::from_esn0_db(6.5, 1.0 / std::sqrt(2.0));
  MagnitudeDistribution dist(spec);
  DrsParams params;
  params.quantizer = DrsParams::Quantizer::kCapped;
  params.t_quan_max = 0.9;
  DrsQuantizer q(params, dist);
  Rng rng(5);
  std::vector<uint8_t> bits(100000, 0);
  std::vector<uint8_t> hard(bits.size());
  std::vector<float> mag(bits.size());
  BiAwgnChannel(spec, 5).transmit(bits, hard, mag);
  for (float m : mag) {
    if (m > 0.9) CHECK(q.drs(m) == 31);
  }
}

TEST_CASE("empirical DRS histogram is uniform under equal-mass thresholds") {
  auto spec = ChannelSpec::from_esn0_db(3.0, 1.0);
  MagnitudeDistribution dist(spec);
  DrsParams params;
  DrsQuantizer q(params, dist);
  const size_t n = 200000;
  std::vector<uint8_t> bits(n, 0);
  std::vector<uint8_t> hard(n);
  std::vector<float> mag(n);
  BiAwgnChannel(spec, 77).transmit(bits, hard, mag);
  std::vector<int> hist(32, 0);
  for (float m : mag) ++hist[q.drs(m)];
  const double mean = n / 32.0;
  const double sd = std::sqrt(n * (1.0 / 32) * (31.0 / 32));
  for (int k = 0; k < 32; ++k) CHECK(std::abs(hist[k] - mean) < 4.0 * sd);
}

TEST_CASE("parameter validation") {
  DrsParams p;
  p.i_s = 5;
  p.i_e = 5;
  CHECK_THROWS(p.validate());
  p = DrsParams{};
  p.j_max = 0;
  CHECK_THROWS(p.validate());
  p = DrsParams{};
  p.j_max = 5;
  CHECK_THROWS(p.validate());
  p = DrsParams{};
  p.quantizer = DrsParams::Quantizer::kCapped;
  p.t_quan_max = 0.0;
  CHECK_THROWS(p.validate());
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "drsd/channel.hpp"

using namespace drsd;

TEST_CASE("spec construction and axis conversions") {
  auto spec = ChannelSpec::from_esn0_db(0.0, 1.0 / std::sqrt(2.0));
  CHECK(spec.noise_variance == doctest::Approx(0.5).epsilon(1e-12));

  // Staircase rate 103/127 on an Eb/N0 axis: 3.6 dB maps to 2.69034 dB Es/N0.
  const double r = 103.0 / 127.0;
  CHECK(ebn0_to_esn0_db(3.6, r, 1) == doctest::Approx(2.69034).epsilon(1e-5));
  CHECK(esn0_to_ebn0_db(ebn0_to_esn0_db(4.2, r, 1), r, 1) == doctest::Approx(4.2));
}

TEST_CASE("magnitude pdf/cdf identities") {
  ChannelSpec spec{1.0, 0.49};  // sigma = 0.7
  MagnitudeDistribution dist(spec);

  // f(0) folds both conditionals onto the same point.
  double n0 = std::exp(-0.5 / 0.49) / (0.7 * std::sqrt(2 * M_PI));
  CHECK(dist.pdf(0.0) == doctest::Approx(2 * n0).epsilon(1e-12));

  // Quadrature normalization to 1e-8 (Simpson).
  const double hi = 1.0 + 10 * 0.7;
  const int steps = 20000;
  double h = hi / steps, sum = dist.pdf(0.0) + dist.pdf(hi);
  for (int i = 1; i < steps; ++i) sum += dist.pdf(i * h) * (i % 2 ? 4.0 : 2.0);
  CHECK(sum * h / 3.0 == doctest::Approx(1.0).epsilon(1e-8));

  // cdf(inv_cdf(p)) and inv_cdf(cdf(r)) round trips.
  for (double p : {0.01, 0.25, 0.5, 0.9, 0.999})
    CHECK(dist.cdf(dist.inv_cdf(p)) == doctest::Approx(p).epsilon(1e-8));
  for (double r = 0.05; r < 3.0; r += 0.17)
    CHECK(dist.inv_cdf(dist.cdf(r)) == doctest::Approx(r).epsilon(1e-8));

  CHECK(dist.inv_cdf(0.0) == 0.0);
  CHECK_THROWS(dist.pdf(-0.1));
  CHECK_THROWS(MagnitudeDistribution(ChannelSpec{1.0, 0.0}));
}

TEST_CASE("transmission replays deterministically") {
  auto spec = ChannelSpec::from_esn0_db(3.0, 1.0);
  std::vector<uint8_t> bits(1000);
  for (size_t i = 0; i < bits.size(); ++i) bits[i] = (i * 7) & 1;
  std::vector<uint8_t> h1(bits.size()), h2(bits.size());
  std::vector<float> m1(bits.size()), m2(bits.size());
  BiAwgnChannel(spec, 42).transmit(bits, h1, m1);
  BiAwgnChannel(spec, 42).transmit(bits, h2, m2);
  CHECK(h1 == h2);
  CHECK(m1 == m2);
}

TEST_CASE("noise disabled gives error-free hard decisions") {
  auto spec = ChannelSpec::from_esn0_db(0.0, 1.0);
  std::vector<uint8_t> bits{0, 1, 1, 0, 1};
  std::vector<uint8_t> hard(5);
  std::vector<float> mag(5);
  BiAwgnChannel(spec, 1, /*noise_enabled=*/false).transmit(bits, hard, mag);
  CHECK(hard == bits);
  for (float m : mag) CHECK(m == doctest::Approx(1.0));
}

TEST_CASE("pre-FEC BER matches Q(a/sigma) within 3 sigma at 1e7 samples") {
  auto spec = ChannelSpec::from_esn0_db(2.0, 1.0 / std::sqrt(2.0));
  const size_t n = 10'000'000;
  std::vector<uint8_t> bits(n, 0);
  std::vector<uint8_t> hard(n);
  std::vector<float> mag(n);
  BiAwgnChannel(spec, 2024).transmit(bits, hard, mag);
  size_t errs = 0;
  for (uint8_t h : hard) errs += h;
  double p = spec.raw_ber();
  double tol = 3.0 * std::sqrt(p * (1 - p) * n);
  CHECK(std::abs(static_cast<double>(errs) - p * n) < tol);
}

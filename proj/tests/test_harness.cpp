#include <doctest.h>

#include <vector>

#include "drsd/harness.hpp"

using namespace drsd;

namespace {

// Deterministic toy simulator: segment i contributes f(i) bits/errors with
// a pseudo-random but index-pure profile.
class FakeSim final : public SegmentSimulator {
 public:
  explicit FakeSim(uint64_t salt) : salt_(salt) {}
  BerCounters run_segment(uint64_t idx) override {
    uint64_t h = splitmix64(idx ^ salt_);
    BerCounters c;
    c.bits = 1000;
    c.bit_errors = h % 7;
    c.frames = 10;
    c.frame_errors = h % 3;
    return c;
  }

 private:
  uint64_t salt_;
};

RunConfig small_staircase_config() {
  RunConfig cfg;
  cfg.code = CodeKind::kStaircase;
  cfg.snr_db = {4.5};
  cfg.sc_chain_blocks = 6;
  cfg.stop = {3 * 6 * 13081ull, 0, 0};  // three segments
  cfg.workers = 2;
  cfg.drs.erasure_threshold = 0.25;
  return cfg;
}

}  // namespace

TEST_CASE("wilson interval basics") {
  auto i0 = wilson_interval(0, 1000000);
  CHECK(i0.lo == 0.0);
  CHECK(i0.hi > 0.0);
  CHECK(i0.hi < 5e-6);
  auto i1 = wilson_interval(100, 1000);
  CHECK(i1.lo < 0.1);
  CHECK(i1.hi > 0.1);
  auto all = wilson_interval(10, 10);
  CHECK(all.hi == 1.0);
}

TEST_CASE("counter merge is associative and partition-independent") {
  FakeSim sim(99);
  BerCounters serial;
  for (uint64_t i = 0; i < 20; ++i) serial.merge(sim.run_segment(i));

  for (int workers : {1, 2, 5}) {
    StopRule stop{20 * 1000, 0, 0};
    BerCounters par = run_point([] { return std::make_unique<FakeSim>(99); }, stop, workers);
    CHECK(par.bits == serial.bits);
    CHECK(par.bit_errors == serial.bit_errors);
    CHECK(par.frames == serial.frames);
    CHECK(par.frame_errors == serial.frame_errors);
  }
}

TEST_CASE("stop rule cuts at the shortest qualifying prefix") {
  // Errors per segment are h(i) % 7; find the prefix reaching 25 errors.
  FakeSim sim(7);
  uint64_t cum = 0, prefix = 0;
  while (cum < 25) cum += sim.run_segment(prefix++).bit_errors;
  StopRule stop{0, 25, 0};
  for (int workers : {1, 3}) {
    BerCounters got = run_point([] { return std::make_unique<FakeSim>(7); }, stop, workers);
    CHECK(got.bit_errors == cum);
    CHECK(got.bits == prefix * 1000);
  }
  CHECK_THROWS(run_point([] { return std::make_unique<FakeSim>(7); }, StopRule{}, 1));
}

TEST_CASE("config parsing, validation and round trip") {
  const char* text =
      "# example\n"
      "code = ofec\n"
      "decoder = ibdd\n"
      "snr_axis = esn0\n"
      "snr_db = 6.4, 6.5, 6.6\n"
      "seed = 42\n"
      "max_bits = 1e8   # scientific counts are fine\n"
      "erasure_threshold = 0.31\n"
      "j_max = 3\n"
      "quantizer = capped\n"
      "t_quan_max = 0.9\n"
      "ofec_iterations = 20\n"
      "ofec_p_r = 6\n";
  RunConfig cfg = parse_run_config(text);
  CHECK(cfg.code == CodeKind::kOfec);
  CHECK(cfg.decoder == DecoderKind::kIbdd);
  CHECK(cfg.axis == SnrAxis::kEsn0);
  CHECK(cfg.snr_db.size() == 3);
  CHECK(cfg.seed == 42);
  CHECK(cfg.stop.max_bits == 100000000);
  CHECK(cfg.drs.erasure_threshold == doctest::Approx(0.31));
  CHECK(cfg.drs.j_max == 3);
  CHECK(cfg.drs.quantizer == DrsParams::Quantizer::kCapped);
  CHECK(cfg.ofec_anchor.p_r == 6);
  cfg.validate();

  RunConfig again = parse_run_config(dump_run_config(cfg));
  CHECK(dump_run_config(again) == dump_run_config(cfg));

  CHECK_THROWS_WITH(parse_run_config("no_such_key = 1\n"),
                    doctest::Contains("unknown key"));
  CHECK_THROWS(parse_run_config("code == staircase\n"));
  CHECK_THROWS(parse_run_config("j_max = banana\n"));
  CHECK_THROWS(parse_run_config("ofec_pi = 1,2,3\n"));

  RunConfig empty_grid;
  empty_grid.snr_db.clear();
  CHECK_THROWS(empty_grid.validate());
  RunConfig no_stop;
  no_stop.snr_db = {1.0};
  no_stop.stop = StopRule{};
  CHECK_THROWS(no_stop.validate());
}

TEST_CASE("axis conversions per code") {
  RunConfig sc;
  sc.code = CodeKind::kStaircase;
  CHECK(sc.to_esn0_db(3.6) == doctest::Approx(2.69034).epsilon(1e-5));
  RunConfig of;
  of.code = CodeKind::kOfec;
  of.axis = SnrAxis::kEsn0;
  // QPSK model: two rails, rate 3552/4096.
  CHECK(of.to_ebn0_db(6.5) ==
        doctest::Approx(6.5 - 10 * std::log10(2.0 * 3552 / 4096)).epsilon(1e-9));
}

TEST_CASE("csv emission: pinned header, field order, parse round trip") {
  std::vector<PointSummary> pts(1);
  pts[0].ebn0_db = 3.6;
  pts[0].esn0_db = 2.69034;
  pts[0].counters = {100000000, 169746, 196, 159};
  std::string csv = format_results_csv(pts);
  CHECK(csv == "EbNo;EsNo;decodedFrame;FrameErr;FER;BER\n"
               "3.6;2.69034;196;159;0.811224;0.00169746\n");

  auto rows = parse_results_csv(csv);
  REQUIRE(rows.size() == 1);
  CHECK(format_result_rows(rows) == csv);
  CHECK(rows[0].ber == doctest::Approx(0.00169746));

  // Round trip over assorted magnitudes, bit-exact on the decimal text.
  std::vector<ResultRow> mixed{
      {3.45, 2.54034, 177, 177, 1.0, 0.0284729},
      {3.7, 2.79034, 1484, 54, 0.0363881, 5.60219e-08},
      {4.2, 3.29034, 10, 0, 0.0, 0.0},
  };
  std::string text = format_result_rows(mixed);
  CHECK(format_result_rows(parse_results_csv(text)) == text);
}

TEST_CASE("staircase point runs are reproducible and worker-invariant") {
  RunConfig cfg = small_staircase_config();
  auto a = run_snr_point(cfg, 4.5);
  auto b = run_snr_point(cfg, 4.5);
  CHECK(a.counters.bits == b.counters.bits);
  CHECK(a.counters.bit_errors == b.counters.bit_errors);
  CHECK(a.counters.frame_errors == b.counters.frame_errors);
  cfg.workers = 1;
  auto c = run_snr_point(cfg, 4.5);
  CHECK(a.counters.bits == c.counters.bits);
  CHECK(a.counters.bit_errors == c.counters.bit_errors);
  CHECK(format_results_csv(std::vector<PointSummary>{a}) ==
        format_results_csv(std::vector<PointSummary>{c}));
  CHECK(a.counters.bits == 3 * 6 * 13081ull);
}

TEST_CASE("ofec point smoke run at high SNR decodes cleanly") {
  RunConfig cfg;
  cfg.code = CodeKind::kOfec;
  cfg.axis = SnrAxis::kEsn0;
  cfg.snr_db = {8.5};
  cfg.ofec_iterations = 3;
  cfg.ofec_segment_pairs = 40;
  cfg.ofec_anchor = OfecAnchorSchedule{2, 1, 11, 4, 0};
  cfg.drs.erasure_threshold = 0.15;
  cfg.stop = {2 * 40 * 1776ull, 0, 0};
  cfg.workers = 2;
  auto p = run_snr_point(cfg, 8.5);
  CHECK(p.counters.bits == 2 * 40 * 1776ull);
  // Raw BER at 8.5 dB is ~2e-3; three iterations clean it out entirely.
  CHECK(p.counters.bit_errors == 0);
}

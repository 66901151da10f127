#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "drsd/ofec.hpp"

using namespace drsd;

namespace {

constexpr int kRowBits = OfecLayout::kRowBits;

struct Rig {
  BchCode code = make_ofec_component();
  OfecLayout layout;
  DrsQuantizer quantizer;
  Rig()
      : quantizer(DrsParams{},
                  MagnitudeDistribution(ChannelSpec::from_esn0_db(6.5, 1.0 / std::sqrt(2.0)))) {}
};

OfecParams small_params(int iterations = 5) {
  OfecParams p;
  p.iterations = iterations;
  p.anchor = OfecAnchorSchedule{2, 1, 2, 4, 0};  // stays conservative throughout
  return p;
}

// Stream driver: encodes `pairs` row pairs of seeded random info, optionally
// flips chosen (row, offset) bits, decodes, and returns emitted rows indexed
// by block row. Magnitudes are flat except where overridden.
struct StreamResult {
  std::vector<std::vector<uint8_t>> sent;     // per row
  std::vector<std::vector<uint8_t>> decided;  // per row (only emitted ones)
  OfecWindowDecoder::Stats stats;
};

StreamResult run_stream(Rig& rig, const OfecParams& params, int pairs, uint64_t seed,
                        const std::map<std::pair<int64_t, int>, float>& corruptions) {
  OfecEncoder enc(rig.code, rig.layout);
  OfecWindowDecoder dec(rig.code, rig.layout, params, rig.quantizer, seed);
  Rng info_rng(seed);
  StreamResult res;
  res.decided.resize(static_cast<size_t>(pairs) * 2);
  std::vector<uint8_t> info(OfecLayout::kInfoPerRowPair);
  std::vector<uint8_t> coded(2 * kRowBits);
  std::vector<uint8_t> hard(2 * kRowBits);
  std::vector<float> mag(2 * kRowBits);
  for (int p = 0; p < pairs; ++p) {
    for (auto& b : info) b = info_rng.next_bit();
    enc.encode_row_pair(info, coded);
    res.sent.emplace_back(coded.begin(), coded.begin() + kRowBits);
    res.sent.emplace_back(coded.begin() + kRowBits, coded.end());
    std::copy(coded.begin(), coded.end(), hard.begin());
    std::fill(mag.begin(), mag.end(), 1.0f);
    for (int64_t row : {int64_t(2 * p), int64_t(2 * p + 1)}) {
      for (const auto& [key, m] : corruptions) {
        if (key.first == row) {
          hard[static_cast<size_t>(row - 2 * p) * kRowBits + key.second] ^= 1;
          mag[static_cast<size_t>(row - 2 * p) * kRowBits + key.second] = m;
        }
      }
    }
    auto out = dec.push_row_pair(mag, hard);
    if (!out.empty()) {
      int64_t first = dec.emitted_rows_begin();
      for (int h = 0; h < 2; ++h)
        if (first + h < static_cast<int64_t>(res.decided.size()))
          res.decided[first + h].assign(out.begin() + h * kRowBits,
                                        out.begin() + (h + 1) * kRowBits);
    }
  }
  res.stats = dec.stats();
  return res;
}

}  // namespace

TEST_CASE("closed-form iteration count: pinned evaluations") {
  CHECK(ofec_iteration_closed_form(25, 7, false) == 2);  // floor((-1)/2) = -1
  CHECK(ofec_iteration_closed_form(26, 7, false) == 3);
  CHECK(ofec_iteration_closed_form(0, 0, true) == 1);
  CHECK(ofec_iteration_closed_form(40, 0, false) == 4);
}

TEST_CASE("anchor schedule follows the two-regime formula") {
  OfecAnchorSchedule s{4, 3, 25, 2, 5};
  const int L = 20;
  CHECK(s.threshold(1, L) == 4);                    // floor(0/2) = 0
  CHECK(s.threshold(2, L) == 4);
  CHECK(s.threshold(3, L) == 7);                    // ell = p_a + 1
  CHECK(s.threshold(2 * L - 5, L) == 3 * ((2 * L - 6) / 2) + 4);
  CHECK(s.threshold(2 * L - 4, L) == 25);           // ell > 2L - p_r
  CHECK(s.threshold(2 * L, L) == 25);
  CHECK_THROWS(OfecAnchorSchedule{2, 2, 2, 0, 0}.validate(20));
  CHECK_THROWS(OfecAnchorSchedule{2, 2, 2, 1, 40}.validate(20));
}

TEST_CASE("layout: gap endpoints per block column") {
  OfecLayout layout;
  // Column 7 couples to the nearest allowed row, column 0 to the farthest.
  CHECK(layout.bit_roles(50, OfecLayout::bit_offset(7, 3, 9)).front_row == 56);
  CHECK(layout.bit_roles(50, OfecLayout::bit_offset(0, 3, 9)).front_row == 70);
  // A codeword spans 128 front and 128 back bits.
  CHECK(OfecLayout::kCodewordBits == 256);
  CHECK(OfecLayout::kBackOffset == 128);
}

TEST_CASE("layout: roles and codeword_bit are mutually inverse") {
  OfecLayout layout;
  for (int64_t row : {40, 41, 57}) {
    for (int off = 0; off < kRowBits; ++off) {
      auto roles = layout.bit_roles(row, off);
      // back role
      int back_p = -1;
      for (int p = OfecLayout::kBackOffset; p < 256; ++p) {
        auto ref = layout.codeword_bit(roles.back_row, roles.back_w, p);
        if (ref.row == row && ref.offset == off) back_p = p;
      }
      REQUIRE(back_p >= 128);
      // front role
      int front_p = -1;
      for (int p = 0; p < OfecLayout::kBackOffset; ++p) {
        auto ref = layout.codeword_bit(roles.front_row, roles.front_w, p);
        if (ref.row == row && ref.offset == off) front_p = p;
      }
      REQUIRE(front_p >= 0);
    }
  }
}

TEST_CASE("layout: bijection, front gaps and pairwise intersections over 40 rows") {
  // Non-identity permutation to make sure nothing depends on pi = id.
  std::array<uint8_t, 16> perm{};
  for (int i = 0; i < 16; ++i) perm[i] = static_cast<uint8_t>((5 * i + 3) % 16);
  OfecLayout layout(perm);

  // Every bit of rows [20, 60) maps to exactly one (back, front) pair and
  // each codeword slot is referenced exactly once.
  std::map<std::pair<int64_t, int>, int> back_hits, front_hits;
  for (int64_t row = 20; row < 60; ++row) {
    for (int off = 0; off < kRowBits; ++off) {
      auto roles = layout.bit_roles(row, off);
      CHECK(roles.front_row - row >= OfecLayout::kGapMin);
      CHECK(roles.front_row - row <= OfecLayout::kGapMax);
      ++back_hits[{roles.back_row, roles.back_w}];
      ++front_hits[{roles.front_row, roles.front_w}];
    }
  }
  for (const auto& [cw, n] : back_hits) CHECK(n == 128);
  // Codewords with all front chunks inside the scanned range appear 128x.
  for (const auto& [cw, n] : front_hits)
    if (cw.first >= 40 && cw.first < 60) CHECK(n == 128);

  // Any two distinct codewords share at most one bit. Collect the bit sets
  // of all codewords whose back row is in [40, 48) plus their front peers.
  std::map<std::pair<int64_t, int>, std::set<std::pair<int64_t, int>>> members;
  for (int64_t back = 20; back < 68; ++back)
    for (int w = 0; w < 16; ++w)
      for (int p = 0; p < 256; ++p) {
        auto ref = layout.codeword_bit(back, w, p);
        members[{back, w}].insert({ref.row, ref.offset});
      }
  std::vector<std::pair<int64_t, int>> keys;
  for (auto& [k, v] : members) {
    CHECK(v.size() == 256);  // no duplicate positions inside one codeword
    keys.push_back(k);
  }
  int checked = 0;
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = i + 1; j < keys.size(); ++j) {
      const auto& a = members[keys[i]];
      const auto& b = members[keys[j]];
      int common = 0;
      for (const auto& bit : b) common += a.count(bit);
      CHECK(common <= 1);
      ++checked;
    }
  CHECK(checked > 100000);
}

TEST_CASE("encoder: counts, linearity and codeword validity") {
  Rig rig;
  CHECK(OfecLayout::kInfoPerRowPair == 3552);
  CHECK(2 * kRowBits == 4096);
  CHECK(rig.code.n() == 256);

  OfecEncoder enc(rig.code, rig.layout);
  std::vector<uint8_t> info(OfecLayout::kInfoPerRowPair, 0);
  std::vector<uint8_t> out(2 * kRowBits);
  for (int p = 0; p < 12; ++p) {
    enc.encode_row_pair(info, out);
    for (uint8_t b : out) REQUIRE(b == 0);
  }

  // Random stream: every codeword whose fronts lie in encoded history
  // passes the zero-syndrome and even-parity checks.
  enc.reset();
  Rng rng(3);
  std::vector<std::vector<uint8_t>> rows;
  for (int p = 0; p < 30; ++p) {
    for (auto& b : info) b = rng.next_bit();
    enc.encode_row_pair(info, out);
    rows.emplace_back(out.begin(), out.begin() + kRowBits);
    rows.emplace_back(out.begin() + kRowBits, out.end());
  }
  std::vector<uint8_t> word(256);
  int verified = 0;
  for (int64_t back = OfecLayout::kGapMax; back < static_cast<int64_t>(rows.size()); ++back) {
    for (int w = 0; w < 16; ++w) {
      for (int p = 0; p < 256; ++p) {
        auto ref = rig.layout.codeword_bit(back, w, p);
        word[p] = rows[ref.row][ref.offset];
      }
      CHECK(rig.code.decode(word).status == BddOutcome::Status::kCodeword);
      CHECK(rig.code.overall_parity(word) == 0);
      ++verified;
    }
  }
  CHECK(verified == 40 * 16);
}

TEST_CASE("noiseless stream: zero-syndrome everywhere, emitted rows match") {
  Rig rig;
  auto params = small_params(3);
  params.verify_tracking = true;
  const int pairs = 45;
  auto res = run_stream(rig, params, pairs, 5, {});
  int decided_rows = 0;
  for (size_t r = 0; r < res.decided.size(); ++r) {
    if (res.decided[r].empty()) continue;
    CHECK(res.decided[r] == res.sent[r]);
    ++decided_rows;
  }
  CHECK(decided_rows == 2 * pairs - (20 * params.iterations + 8));
  CHECK(res.stats.tracking_mismatches == 0);
  CHECK(res.stats.emission_ell_errors == 0);
  CHECK(res.stats.codewords_decoded > 0);
  CHECK(res.stats.clean_skips > res.stats.codewords_decoded);
}

TEST_CASE("scattered single errors are corrected; tracking stays consistent") {
  Rig rig;
  auto params = small_params(4);
  params.verify_tracking = true;
  std::map<std::pair<int64_t, int>, float> errs;
  // Channel errors come with small magnitudes, so their DRS starts low and
  // the anchor rule lets the decoder flip them.
  errs[{30, 100}] = 0.2f;
  errs[{31, 700}] = 0.2f;
  errs[{44, 1500}] = 0.2f;
  auto res = run_stream(rig, params, 60, 6, errs);
  for (size_t r = 0; r < res.decided.size(); ++r)
    if (!res.decided[r].empty()) CHECK(res.decided[r] == res.sent[r]);
  CHECK(res.stats.tracking_mismatches == 0);
  CHECK(res.stats.emission_ell_errors == 0);
}

TEST_CASE("transient failure flags clear on later success; SPR stays idle") {
  Rig rig;
  auto params = small_params(5);
  params.spr = true;
  params.verify_tracking = true;
  // Three errors in one back codeword (t=2 fails first), spread over three
  // different front codewords that each see a single error and fix it; the
  // back codeword then succeeds, its flags clear, and SPR never fires.
  const int64_t row = 36;
  std::map<std::pair<int64_t, int>, float> errs;
  for (int c : {1, 6, 11}) errs[{row, OfecLayout::bit_offset(3, 5, c)}] = 0.2f;
  auto res = run_stream(rig, params, 80, 13, errs);
  CHECK(res.stats.spr_flips == 0);
  for (size_t r = 0; r < res.decided.size(); ++r)
    if (!res.decided[r].empty()) CHECK(res.decided[r] == res.sent[r]);
}

TEST_CASE("3x3 stall pattern: survives without SPR, removed with SPR") {
  Rig rig;
  // Nine errors at the intersections of three back and three front
  // codewords: rows {r1,r2,r3} x columns {c1,c2,c3} of one square block.
  const int64_t row = 34;
  const int block_col = 5;
  const int rows3[3] = {2, 7, 11};
  const int cols3[3] = {3, 8, 14};
  std::map<std::pair<int64_t, int>, float> errs;
  for (int r : rows3)
    for (int c : cols3) errs[{row, OfecLayout::bit_offset(block_col, r, c)}] = 1.0f;

  auto params = small_params(5);
  params.spr = false;
  params.verify_tracking = true;
  auto res = run_stream(rig, params, 80, 7, errs);
  REQUIRE(!res.decided[row].empty());
  int residual = 0;
  for (int off = 0; off < kRowBits; ++off)
    residual += res.decided[row][off] != res.sent[row][off];
  CHECK(residual == 9);  // t=2 BDD cannot break a 3x3 grid
  CHECK(res.stats.tracking_mismatches == 0);

  params.spr = true;
  auto res2 = run_stream(rig, params, 80, 7, errs);
  CHECK(res2.stats.spr_flips == 9);
  // Exactly the nine injected positions were flipped.
  std::set<std::pair<int64_t, int>> flipped(res2.stats.spr_flip_log.begin(),
                                            res2.stats.spr_flip_log.end());
  std::set<std::pair<int64_t, int>> injected;
  for (const auto& [key, m] : errs) injected.insert(key);
  CHECK(flipped == injected);
  for (size_t r = 0; r < res2.decided.size(); ++r)
    if (!res2.decided[r].empty()) CHECK(res2.decided[r] == res2.sent[r]);
}

TEST_CASE("degeneration: T=0, anchors off, SPR off equals plain iBDD") {
  Rig rig;
  OfecParams drsd = small_params(3);
  drsd.spr = false;
  drsd.anchors_enabled = false;
  drsd.drs.erasure_threshold = 0.0;
  OfecParams ibdd = drsd;
  ibdd.ibdd = true;

  // Same corrupted stream through both decoders, moderate error density.
  std::map<std::pair<int64_t, int>, float> errs;
  Rng rng(8);
  for (int e = 0; e < 600; ++e)
    errs[{static_cast<int64_t>(rng.next_below(100)), static_cast<int>(rng.next_below(kRowBits))}] =
        1.0f;
  auto a = run_stream(rig, drsd, 70, 9, errs);
  auto b = run_stream(rig, ibdd, 70, 9, errs);
  for (size_t r = 0; r < a.decided.size(); ++r) {
    REQUIRE(a.decided[r].size() == b.decided[r].size());
    CHECK(a.decided[r] == b.decided[r]);
  }
}

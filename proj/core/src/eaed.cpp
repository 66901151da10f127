#include "drsd/eaed.hpp"

#include <algorithm>

namespace drsd {

namespace {

void push_candidate(EaedScratch& s, std::span<const uint8_t> filled, const BddOutcome& bdd,
                    std::span<const uint8_t> flags, int order) {
  EaedCandidate& c = s.cand[s.num_cand];
  c.word.assign(filled.begin(), filled.end());
  for (uint16_t p : bdd.flip_positions()) c.word[p] ^= 1;
  // Unique candidates only.
  for (int i = 0; i < s.num_cand; ++i)
    if (s.cand[i].word == c.word) return;
  c.num_flips = 0;
  for (uint16_t p : bdd.flip_positions())
    if (!(flags[p] & kFlagErased)) c.flips[c.num_flips++] = p;
  c.order = static_cast<uint8_t>(order);
  ++s.num_cand;
}

}  // namespace

EaedStatus eaed_candidates(const BchCode& code, std::span<const uint8_t> y,
                           std::span<const uint8_t> flags, int j_max, Rng& rng,
                           EaedScratch& scratch) {
  scratch.num_cand = 0;
  scratch.erased_pos.clear();
  for (size_t i = 0; i < y.size(); ++i)
    if (flags[i] & kFlagErased) scratch.erased_pos.push_back(static_cast<int32_t>(i));
  const int e_count = static_cast<int>(scratch.erased_pos.size());

  if (e_count == 0) {
    BddOutcome out = code.decode(y);
    if (out.status == BddOutcome::Status::kCodeword) return EaedStatus::kZeroSyndrome;
    if (out.status == BddOutcome::Status::kFailure) return EaedStatus::kFailure;
    push_candidate(scratch, y, out, flags, 0);
    return EaedStatus::kCandidates;
  }

  const int pairs = e_count == 1 ? 1 : std::min(j_max, e_count);
  // Distinct pairs of complementary fill patterns. Forcing the first bit
  // of each pattern to 0 canonicalizes {p, ~p}, so pair uniqueness reduces
  // to pattern uniqueness; feasible since pairs <= 2^(E-1).
  for (int j = 0; j < pairs; ++j) {
    auto& pat = scratch.patterns[j];
    for (;;) {
      pat.resize(e_count);
      pat[0] = 0;
      for (int i = 1; i < e_count; ++i) pat[i] = rng.next_bit();
      bool dup = false;
      for (int prev = 0; prev < j && !dup; ++prev) dup = (scratch.patterns[prev] == pat);
      if (!dup) break;
    }
  }

  scratch.filled.assign(y.begin(), y.end());
  for (int j = 0; j < pairs; ++j) {
    const auto& pat = scratch.patterns[j];
    for (int half = 0; half < 2; ++half) {
      for (int i = 0; i < e_count; ++i)
        scratch.filled[scratch.erased_pos[i]] = pat[i] ^ static_cast<uint8_t>(half);
      BddOutcome out = code.decode(scratch.filled);
      if (out.ok()) push_candidate(scratch, scratch.filled, out, flags, 2 * j + half);
    }
  }
  if (scratch.num_cand == 0) return EaedStatus::kFailure;
  std::stable_sort(scratch.cand.begin(), scratch.cand.begin() + scratch.num_cand,
                   [](const EaedCandidate& a, const EaedCandidate& b) {
                     return a.num_flips < b.num_flips;
                   });
  return EaedStatus::kCandidates;
}

int md_select(std::span<const EaedCandidate> cands, std::span<const int8_t> drs,
              std::span<const int16_t> anchor_thresholds, std::span<const uint8_t> flags,
              bool anchors_enabled) {
  for (size_t i = 0; i < cands.size(); ++i) {
    bool hits_anchor = false;
    for (uint16_t p : cands[i].flip_positions()) {
      if (flags[p] & kFlagFrozen) {
        hits_anchor = true;
        break;
      }
      if (anchors_enabled && drs[p] > anchor_thresholds[p]) {
        hits_anchor = true;
        break;
      }
    }
    if (!hits_anchor) return static_cast<int>(i);
  }
  return -1;
}

ComponentDecoder::ComponentDecoder(const BchCode& code, const DrsParams& params, uint64_t seed)
    : code_(&code), params_(params), rng_(seed) {
  params_.validate();
  const size_t n = static_cast<size_t>(code.n());
  y_.resize(n);
  yflags_.resize(n);
  ydrs_.resize(n);
  scratch_.filled.reserve(n);
  scratch_.erased_pos.reserve(n);
  scratch_.changed.reserve(n);
  for (auto& c : scratch_.cand) c.word.reserve(n);
}

void ComponentDecoder::bump_clean_word(SoftBitField& field, std::span<const int32_t> pos) const {
  const int8_t hi = static_cast<int8_t>(params_.i_e);
  for (int32_t p : pos) {
    if (field.flags[p] & kFlagFrozen) continue;
    if (field.drs[p] < hi) ++field.drs[p];
  }
}

WordOutcome ComponentDecoder::decode_drsd(SoftBitField& field, std::span<const int32_t> pos,
                                          std::span<const int16_t> anchor_thresholds) {
  const size_t n = pos.size();
  for (size_t i = 0; i < n; ++i) {
    const int32_t p = pos[i];
    y_[i] = field.bits[p];
    yflags_[i] = field.flags[p];
    ydrs_[i] = field.drs[p];
  }
  scratch_.changed.clear();

  EaedStatus st = eaed_candidates(*code_, {y_.data(), n}, {yflags_.data(), n}, params_.j_max,
                                  rng_, scratch_);
  if (st == EaedStatus::kZeroSyndrome) {
    bump_clean_word(field, pos);
    return WordOutcome::kZeroSyndrome;
  }
  if (st == EaedStatus::kFailure) return WordOutcome::kFailure;

  std::span<const EaedCandidate> cands(scratch_.cand.data(), scratch_.num_cand);
  int pick = md_select(cands, {ydrs_.data(), n}, anchor_thresholds, {yflags_.data(), n},
                       anchors_enabled);

  const int8_t lo = static_cast<int8_t>(params_.i_s);
  if (pick < 0) {
    // Every candidate flips an anchor: keep the word (erasures persist) and
    // erode the DRS along the best candidate's flips.
    for (uint16_t p : cands[0].flip_positions())
      if (field.drs[pos[p]] > lo) --field.drs[pos[p]];
    return WordOutcome::kAllMiscorrected;
  }

  const EaedCandidate& c = cands[pick];
  for (uint16_t p : c.flip_positions()) {
    field.bits[pos[p]] = c.word[p];
    if (field.drs[pos[p]] > lo) --field.drs[pos[p]];
    scratch_.changed.push_back(p);
  }
  for (int32_t p : scratch_.erased_pos) {
    field.bits[pos[p]] = c.word[p];
    field.flags[pos[p]] &= static_cast<uint8_t>(~kFlagErased);
    scratch_.changed.push_back(p);
  }
  return WordOutcome::kAccepted;
}

WordOutcome ComponentDecoder::decode_ibdd(SoftBitField& field, std::span<const int32_t> pos) {
  const size_t n = pos.size();
  for (size_t i = 0; i < n; ++i) y_[i] = field.bits[pos[i]];
  scratch_.changed.clear();

  BddOutcome out = code_->decode({y_.data(), n});
  if (out.status == BddOutcome::Status::kCodeword) return WordOutcome::kZeroSyndrome;
  if (out.status == BddOutcome::Status::kFailure) return WordOutcome::kFailure;
  for (uint16_t p : out.flip_positions())
    if (field.flags[pos[p]] & kFlagFrozen) return WordOutcome::kAllMiscorrected;
  for (uint16_t p : out.flip_positions()) {
    field.bits[pos[p]] ^= 1;
    scratch_.changed.push_back(p);
  }
  return WordOutcome::kAccepted;
}

}  // namespace drsd

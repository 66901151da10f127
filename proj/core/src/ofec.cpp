#include "drsd/ofec.hpp"

#include <algorithm>
#include <stdexcept>

namespace drsd {

OfecLayout::OfecLayout() {
  for (int i = 0; i < kBlockSide; ++i) pi[i] = pi_inv[i] = static_cast<uint8_t>(i);
}

OfecLayout::OfecLayout(const std::array<uint8_t, kBlockSide>& permutation) : pi(permutation) {
  std::array<uint8_t, kBlockSide> seen{};
  for (int i = 0; i < kBlockSide; ++i) {
    if (pi[i] >= kBlockSide || seen[pi[i]]) throw std::invalid_argument("OfecLayout: not a permutation");
    seen[pi[i]] = 1;
    pi_inv[pi[i]] = static_cast<uint8_t>(i);
  }
}

BchCode make_ofec_component() { return BchCode(GaloisField(8), 2, 0, true); }

void OfecAnchorSchedule::validate(int iterations) const {
  if (p_a < 1) throw std::invalid_argument("OfecAnchorSchedule: p_a must be >= 1");
  if (p_r < 0 || p_r >= 2 * iterations)
    throw std::invalid_argument("OfecAnchorSchedule: p_r must be in [0, 2L)");
}

int ofec_iteration_closed_form(int64_t rel_depth, int block_col, bool buffer_row) {
  int64_t ell = 2 * floor_div(rel_depth, 20);
  if (floor_div(pos_mod(rel_depth, 20) - 6, 2) >= 7 - block_col) ++ell;
  if (buffer_row) ++ell;
  return static_cast<int>(ell);
}

OfecEncoder::OfecEncoder(const BchCode& component, const OfecLayout& layout)
    : code_(&component), layout_(&layout) {
  if (component.n() != OfecLayout::kCodewordBits)
    throw std::invalid_argument("OfecEncoder: component length must be 256");
  hist_.assign(static_cast<size_t>(OfecLayout::kGapMax) * OfecLayout::kRowBits, 0);
  info_buf_.resize(component.k());
  cw_buf_.resize(component.n());
}

void OfecEncoder::reset() {
  std::fill(hist_.begin(), hist_.end(), 0);
  next_row_ = 0;
}

void OfecEncoder::encode_row(std::span<const uint8_t> info, std::span<uint8_t> row_out) {
  const int64_t row = next_row_;
  for (int w = 0; w < OfecLayout::kBlockSide; ++w) {
    // Front bits were fixed by earlier rows; rows before the stream are zero.
    for (int p = 0; p < OfecLayout::kBackOffset; ++p) {
      auto ref = layout_->codeword_bit(row, w, p);
      info_buf_[p] = ref.row < 0
                         ? 0
                         : hist_[static_cast<size_t>(pos_mod(ref.row, OfecLayout::kGapMax)) *
                                     OfecLayout::kRowBits +
                                 ref.offset];
    }
    for (int q = 0; q < OfecLayout::kInfoPerCodeword; ++q)
      info_buf_[OfecLayout::kBackOffset + q] = info[w * OfecLayout::kInfoPerCodeword + q];
    code_->encode(info_buf_, cw_buf_);
    for (int p = OfecLayout::kBackOffset; p < OfecLayout::kCodewordBits; ++p) {
      auto ref = layout_->codeword_bit(row, w, p);
      row_out[ref.offset] = cw_buf_[p];
    }
  }
  std::copy(row_out.begin(), row_out.end(),
            hist_.begin() + static_cast<size_t>(pos_mod(row, OfecLayout::kGapMax)) * OfecLayout::kRowBits);
  ++next_row_;
}

void OfecEncoder::encode_row_pair(std::span<const uint8_t> info, std::span<uint8_t> rows_out) {
  if (info.size() != static_cast<size_t>(OfecLayout::kInfoPerRowPair) ||
      rows_out.size() != static_cast<size_t>(2 * OfecLayout::kRowBits))
    throw std::invalid_argument("OfecEncoder::encode_row_pair: bad buffer size");
  const int half = OfecLayout::kInfoPerRowPair / 2;
  encode_row(info.first(half), rows_out.first(OfecLayout::kRowBits));
  encode_row(info.subspan(half), rows_out.subspan(OfecLayout::kRowBits));
}

OfecWindowDecoder::OfecWindowDecoder(const BchCode& component, const OfecLayout& layout,
                                     const OfecParams& params, const DrsQuantizer& quantizer,
                                     uint64_t seed)
    : code_(&component),
      layout_(layout),
      params_(params),
      quantizer_(&quantizer),
      component_(component, params.drs, seed),
      depth_(20 * params.iterations + 8) {
  params_.anchor.validate(params_.iterations);
  component_.anchors_enabled = params_.anchors_enabled;
  field_.resize(static_cast<size_t>(depth_) * kRowBits);
  ell_.assign(field_.size(), 0);
  cw_clean_.assign(static_cast<size_t>(depth_) * OfecLayout::kBlockSide, 1);
  pos_.resize(OfecLayout::kCodewordBits);
  ta_.resize(OfecLayout::kCodewordBits);
  const int max_ell = 2 * params_.iterations;
  ta_table_.resize(max_ell + 1);
  for (int ell = 1; ell <= max_ell; ++ell)
    ta_table_[ell] = static_cast<int16_t>(params_.anchor.threshold(ell, params_.iterations));
  ta_table_[0] = ta_table_[1];
  emitted_.resize(2 * kRowBits);
  reset();
}

void OfecWindowDecoder::reset() {
  std::fill(field_.bits.begin(), field_.bits.end(), 0);
  std::fill(field_.flags.begin(), field_.flags.end(), kFlagFrozen);
  std::fill(field_.drs.begin(), field_.drs.end(), static_cast<int8_t>(params_.drs.i_e));
  std::fill(ell_.begin(), ell_.end(), 0);
  std::fill(cw_clean_.begin(), cw_clean_.end(), 1);
  next_row_ = 0;
  emitted_begin_ = -1;
  stats_ = Stats{};
}

void OfecWindowDecoder::mark_dirty(int64_t row, int offset, int64_t newest) {
  auto roles = layout_.bit_roles(row, offset);
  cw_clean_[static_cast<size_t>(slot_of(roles.back_row)) * OfecLayout::kBlockSide + roles.back_w] = 0;
  if (roles.front_row <= newest)
    cw_clean_[static_cast<size_t>(slot_of(roles.front_row)) * OfecLayout::kBlockSide + roles.front_w] = 0;
}

void OfecWindowDecoder::decode_back_codewords(int64_t row, int64_t newest) {
  const bool drsd = !params_.ibdd;
  const bool track = drsd || params_.verify_tracking;
  uint8_t* clean_row = &cw_clean_[static_cast<size_t>(slot_of(row)) * OfecLayout::kBlockSide];
  const int64_t rel_row = newest - row;

  for (int w = 0; w < OfecLayout::kBlockSide; ++w) {
    // A clean word re-decodes to itself; with tracking off there is nothing
    // left to update (its role flags were cleared when it last succeeded).
    if (clean_row[w] && !track) continue;
    // Gather positions; ring depth covers every front reference.
    for (int p = 0; p < OfecLayout::kCodewordBits; ++p) {
      auto ref = layout_.codeword_bit(row, w, p);
      pos_[p] = static_cast<int32_t>(static_cast<size_t>(slot_of(ref.row)) * kRowBits + ref.offset);
    }

    if (track) {
      // Every bit of a decoded word advances one iteration; the anchor
      // threshold follows the advanced count (first decode -> ell = 1).
      for (int p = 0; p < OfecLayout::kCodewordBits; ++p) {
        uint8_t& e = ell_[pos_[p]];
        if (params_.verify_tracking && p < OfecLayout::kBackOffset &&
            !(field_.flags[pos_[p]] & kFlagFrozen)) {
          // Bits of rows inside the first 8 depths of a cycle are buffer
          // bits; everywhere else the closed form must match the counter.
          int chunk = p / OfecLayout::kBlockSide;
          int64_t rel_bit = rel_row + OfecLayout::kGapMax - 2 * chunk;
          if (pos_mod(rel_bit, 20) >= 8 &&
              ofec_iteration_closed_form(rel_bit, chunk, false) != e)
            ++stats_.tracking_mismatches;
        }
        if (e < 255) ++e;
        ta_[p] = ta_table_[std::min<int>(e, static_cast<int>(ta_table_.size()) - 1)];
      }
    }

    if (clean_row[w]) {
      if (drsd) component_.bump_clean_word(field_, pos_);
      ++stats_.clean_skips;
      continue;
    }

    WordOutcome out = drsd ? component_.decode_drsd(field_, pos_, ta_)
                           : component_.decode_ibdd(field_, pos_);
    ++stats_.codewords_decoded;

    const bool success = out == WordOutcome::kZeroSyndrome || out == WordOutcome::kAccepted;
    if (params_.spr) {
      for (int p = 0; p < OfecLayout::kCodewordBits; ++p) {
        const uint8_t role_flag = p < OfecLayout::kBackOffset ? kFlagSprFront : kFlagSprBack;
        if (success)
          field_.flags[pos_[p]] &= static_cast<uint8_t>(~role_flag);
        else
          field_.flags[pos_[p]] |= role_flag;
      }
    }
    if (out == WordOutcome::kAccepted) {
      for (int32_t local : component_.scratch().changed) {
        auto ref = layout_.codeword_bit(row, w, local);
        mark_dirty(ref.row, ref.offset, newest);
      }
    }
    clean_row[w] = success ? 1 : 0;
  }
}

void OfecWindowDecoder::apply_spr(int64_t row) {
  const int slot = slot_of(row);
  uint8_t* flags = &field_.flags[static_cast<size_t>(slot) * kRowBits];
  uint8_t* bits = &field_.bits[static_cast<size_t>(slot) * kRowBits];
  for (int off = 0; off < kRowBits; ++off) {
    const uint8_t f = flags[off];
    if (f & (kFlagFrozen | kFlagErased)) continue;
    if ((f & kFlagSprFront) && (f & kFlagSprBack)) {
      ++stats_.spr_flips;
      if (params_.verify_tracking) stats_.spr_flip_log.emplace_back(row, off);
      bits[off] ^= 1;
      mark_dirty(row, off, next_row_ - 1);
    }
  }
}

std::span<const uint8_t> OfecWindowDecoder::push_row_pair(std::span<const float> magnitude,
                                                          std::span<const uint8_t> hard) {
  if (magnitude.size() != static_cast<size_t>(2 * kRowBits) || hard.size() != magnitude.size())
    throw std::invalid_argument("OfecWindowDecoder::push_row_pair: bad buffer size");

  // The arriving rows displace the two rows that completed their window.
  const int64_t r0 = next_row_, r1 = next_row_ + 1;
  emitted_begin_ = r0 - depth_;
  const bool emit = emitted_begin_ >= 0;
  const int max_ell = 2 * params_.iterations;
  for (int half = 0; half < 2; ++half) {
    // The leaving row and the arriving row share a ring slot.
    const int slot = slot_of(r0 + half);
    uint8_t* bits = &field_.bits[static_cast<size_t>(slot) * kRowBits];
    if (emit) {
      std::copy(bits, bits + kRowBits, emitted_.begin() + static_cast<size_t>(half) * kRowBits);
      if (params_.verify_tracking) {
        for (int off = 0; off < kRowBits; ++off)
          if (!(field_.flags[static_cast<size_t>(slot) * kRowBits + off] & kFlagFrozen) &&
              ell_[static_cast<size_t>(slot) * kRowBits + off] != max_ell)
            ++stats_.emission_ell_errors;
      }
    }
    // Initialize the arriving row in place.
    uint8_t* abits = bits;
    uint8_t* aflags = &field_.flags[static_cast<size_t>(slot) * kRowBits];
    int8_t* adrs = &field_.drs[static_cast<size_t>(slot) * kRowBits];
    uint8_t* aell = &ell_[static_cast<size_t>(slot) * kRowBits];
    const float* mag = magnitude.data() + static_cast<size_t>(half) * kRowBits;
    const uint8_t* hrd = hard.data() + static_cast<size_t>(half) * kRowBits;
    const bool want_erasures = !params_.ibdd && params_.drs.erasure_threshold > 0.0;
    for (int i = 0; i < kRowBits; ++i) {
      abits[i] = hrd[i];
      aflags[i] = (want_erasures && quantizer_->erased(mag[i])) ? kFlagErased : 0;
      adrs[i] = quantizer_->drs(mag[i]);
      aell[i] = 0;
    }
    std::fill(cw_clean_.begin() + static_cast<size_t>(slot) * OfecLayout::kBlockSide,
              cw_clean_.begin() + static_cast<size_t>(slot + 1) * OfecLayout::kBlockSide, 0);
  }
  next_row_ = r1 + 1;
  const int64_t newest = r1;

  // Stall-pattern removal fires when a row has one full iteration left.
  if (params_.spr) {
    for (int64_t row : {newest - 20 * (params_.iterations - 1) - 1,
                        newest - 20 * (params_.iterations - 1)}) {
      if (row >= 0) apply_spr(row);
    }
  }

  // One decoding event: rows at depths 6+20j and 7+20j, shallowest first.
  for (int j = 0; j < params_.iterations; ++j) {
    for (int d : {7 + 20 * j, 6 + 20 * j}) {
      const int64_t row = newest - d;
      if (row >= 0) decode_back_codewords(row, newest);
    }
  }

  return emit ? std::span<const uint8_t>(emitted_) : std::span<const uint8_t>();
}

}  // namespace drsd

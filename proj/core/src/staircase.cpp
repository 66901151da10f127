#include "drsd/staircase.hpp"

#include <stdexcept>

namespace drsd {

BchCode StaircaseCode::make_component() { return BchCode(GaloisField(8), 3, 1); }

int staircase_anchor_threshold(int x, int window) {
  if (x < 0 || x >= window) throw std::invalid_argument("staircase_anchor_threshold: x out of range");
  return x < window - 1 ? 2 * (x + 1) : 28;
}

StaircaseEncoder::StaircaseEncoder(const BchCode& component) : code_(&component) {
  if (component.n() != 2 * StaircaseCode::kBlockSize)
    throw std::invalid_argument("StaircaseEncoder: component length must be 2m");
  prev_.assign(StaircaseCode::kBlockBits, 0);
  info_buf_.resize(component.k());
  cw_buf_.resize(component.n());
}

void StaircaseEncoder::reset() { std::fill(prev_.begin(), prev_.end(), 0); }

void StaircaseEncoder::encode_block(std::span<const uint8_t> info, std::span<uint8_t> out) {
  constexpr int m = StaircaseCode::kBlockSize;
  constexpr int ic = StaircaseCode::kInfoCols;
  if (info.size() != static_cast<size_t>(StaircaseCode::kInfoBitsPerBlock) ||
      out.size() != static_cast<size_t>(StaircaseCode::kBlockBits))
    throw std::invalid_argument("StaircaseEncoder::encode_block: bad buffer size");
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) info_buf_[i] = prev_[i * m + j];  // column j of B_{i-1}
    for (int q = 0; q < ic; ++q) info_buf_[m + q] = info[j * ic + q];
    code_->encode(info_buf_, cw_buf_);
    for (int q = 0; q < m; ++q) out[j * m + q] = cw_buf_[m + q];
  }
  std::copy(out.begin(), out.end(), prev_.begin());
}

StaircaseWindowDecoder::StaircaseWindowDecoder(const BchCode& component,
                                               const StaircaseParams& params,
                                               const DrsQuantizer& quantizer, uint64_t seed)
    : code_(&component),
      params_(params),
      quantizer_(&quantizer),
      component_(component, params.drs, seed) {
  if (params_.window < 2) throw std::invalid_argument("StaircaseWindowDecoder: window too short");
  component_.anchors_enabled = params_.anchors_enabled;
  field_.resize(static_cast<size_t>(params_.window) * kBlockBits);
  word_clean_.assign(static_cast<size_t>(params_.window) * kM, 0);
  pos_.resize(code_->n());
  ta_.resize(code_->n());
  emitted_.resize(kBlockBits);
  reset();
}

void StaircaseWindowDecoder::reset() {
  // Slot 0 starts as the known all-zero pad block B_0.
  std::fill(field_.bits.begin(), field_.bits.end(), 0);
  std::fill(field_.flags.begin(), field_.flags.end(), 0);
  std::fill(field_.drs.begin(), field_.drs.end(), static_cast<int8_t>(params_.drs.i_e));
  std::fill(word_clean_.begin(), word_clean_.end(), 1);
  for (int i = 0; i < kBlockBits; ++i) field_.flags[i] |= kFlagFrozen;
  next_block_ = 1;
}

void StaircaseWindowDecoder::mark_bit_dirty(int64_t block, int row, int col, int64_t first,
                                            int64_t last) {
  // Bit (block, row, col) sits in word `row` of the pair ending at `block`
  // and in word `col` of the pair ending at `block + 1`.
  if (block >= first && block <= last) word_clean_[slot_of(block) * kM + row] = 0;
  if (block + 1 <= last) word_clean_[slot_of(block + 1) * kM + col] = 0;
}

void StaircaseWindowDecoder::decode_pair(int64_t left, int64_t right, int64_t newest) {
  const int ls = slot_of(left), rs = slot_of(right);
  const int32_t lbase = ls * kBlockBits, rbase = rs * kBlockBits;
  const int64_t first = newest - params_.window + 1;

  if (!params_.ibdd && params_.anchors_enabled) {
    const int16_t ta_l =
        static_cast<int16_t>(staircase_anchor_threshold(static_cast<int>(newest - left), params_.window));
    const int16_t ta_r =
        static_cast<int16_t>(staircase_anchor_threshold(static_cast<int>(newest - right), params_.window));
    std::fill(ta_.begin(), ta_.begin() + kM, ta_l);
    std::fill(ta_.begin() + kM, ta_.end(), ta_r);
  }

  uint8_t* clean = &word_clean_[rs * kM];
  for (int j = 0; j < kM; ++j) {
    if (clean[j] && params_.ibdd) continue;
    for (int i = 0; i < kM; ++i) pos_[i] = lbase + i * kM + j;
    int32_t* right_pos = pos_.data() + kM;
    const int32_t row_base = rbase + j * kM;
    for (int q = 0; q < kM; ++q) right_pos[q] = row_base + q;

    if (clean[j]) {
      // A clean pass over a zero-syndrome word only bumps the DRS.
      component_.bump_clean_word(field_, pos_);
      continue;
    }
    WordOutcome out = params_.ibdd ? component_.decode_ibdd(field_, pos_)
                                   : component_.decode_drsd(field_, pos_, ta_);
    if (out == WordOutcome::kAccepted) {
      for (int32_t local : component_.scratch().changed) {
        if (local < kM)
          mark_bit_dirty(left, local, j, first, newest);
        else
          mark_bit_dirty(right, j, local - kM, first, newest);
      }
    }
    clean[j] = (out == WordOutcome::kZeroSyndrome || out == WordOutcome::kAccepted) ? 1 : 0;
  }
}

std::span<const uint8_t> StaircaseWindowDecoder::push_block(std::span<const float> magnitude,
                                                            std::span<const uint8_t> hard) {
  if (magnitude.size() != static_cast<size_t>(kBlockBits) || hard.size() != magnitude.size())
    throw std::invalid_argument("StaircaseWindowDecoder::push_block: bad buffer size");
  const int64_t block = next_block_++;
  const int slot = slot_of(block);
  uint8_t* bits = &field_.bits[static_cast<size_t>(slot) * kBlockBits];
  uint8_t* flags = &field_.flags[static_cast<size_t>(slot) * kBlockBits];
  int8_t* drs = &field_.drs[static_cast<size_t>(slot) * kBlockBits];
  const bool want_erasures = !params_.ibdd && params_.drs.erasure_threshold > 0.0;
  for (int i = 0; i < kBlockBits; ++i) {
    bits[i] = hard[i];
    flags[i] = (want_erasures && quantizer_->erased(magnitude[i])) ? kFlagErased : 0;
    drs[i] = quantizer_->drs(magnitude[i]);
  }
  std::fill(word_clean_.begin() + static_cast<size_t>(slot) * kM,
            word_clean_.begin() + static_cast<size_t>(slot + 1) * kM, 0);

  const int64_t first = std::max<int64_t>(0, block - params_.window + 1);
  for (int it = 0; it < params_.iterations; ++it)
    for (int64_t b = first + 1; b <= block; ++b) decode_pair(b - 1, b, block);

  if (block - first == params_.window - 1) {
    const uint8_t* obits = &field_.bits[static_cast<size_t>(slot_of(first)) * kBlockBits];
    std::copy(obits, obits + kBlockBits, emitted_.begin());
    return emitted_;
  }
  return {};
}

}  // namespace drsd

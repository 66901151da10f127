#pragma once
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "drsd/eaed.hpp"
#include "drsd/util.hpp"

namespace drsd {

/// Spatially-coupled structure over 16x16 square blocks, 8 block columns
/// per row. Every bit is the back of one codeword and the front of another:
/// codeword (R, w) has its back in bit-row w of block row R and its front
/// chunk C in column pi[w] of square block (R - 20 + 2C, C), so front
/// references reach between 6 and 20 block rows back.
struct OfecLayout {
  static constexpr int kBlockSide = 16;
  static constexpr int kBlockCols = 8;
  static constexpr int kRowBits = kBlockCols * kBlockSide * kBlockSide;  // 2048
  static constexpr int kCodewordBits = 256;
  static constexpr int kBackOffset = 128;
  static constexpr int kInfoPerCodeword = 111;
  static constexpr int kInfoPerRowPair = 3552;
  static constexpr int kCodedPerRowPair = 2 * kRowBits;  // 4096
  static constexpr int kGapMin = 6;
  static constexpr int kGapMax = 20;

  OfecLayout();  // identity within-block permutation
  explicit OfecLayout(const std::array<uint8_t, kBlockSide>& permutation);

  static constexpr int bit_offset(int block_col, int bit_row, int bit_col) {
    return block_col * kBlockSide * kBlockSide + bit_row * kBlockSide + bit_col;
  }

  struct BitRef {
    int64_t row;  // block row index
    int offset;   // within-row offset, see bit_offset()
  };
  /// Storage location of position p (0..255) of back codeword (back_row, w).
  BitRef codeword_bit(int64_t back_row, int w, int p) const {
    if (p < kBackOffset) {
      int chunk = p / kBlockSide;
      return {back_row - kGapMax + 2 * chunk,
              bit_offset(chunk, p % kBlockSide, pi[w])};
    }
    int q = p - kBackOffset;
    return {back_row, bit_offset(q / kBlockSide, w, q % kBlockSide)};
  }

  struct Roles {
    int64_t back_row;
    int back_w;
    int64_t front_row;  // back row of the codeword whose front holds this bit
    int front_w;
  };
  Roles bit_roles(int64_t row, int offset) const {
    int block_col = offset / (kBlockSide * kBlockSide);
    int rem = offset % (kBlockSide * kBlockSide);
    int bit_row = rem / kBlockSide, bit_col = rem % kBlockSide;
    return {row, bit_row, row + kGapMax - 2 * block_col, pi_inv[bit_col]};
  }

  std::array<uint8_t, kBlockSide> pi;
  std::array<uint8_t, kBlockSide> pi_inv;
};

BchCode make_ofec_component();  // [256,239] t=2, singly extended

/// Anchor threshold schedule driven by the per-bit iteration count ell >= 1.
struct OfecAnchorSchedule {
  int ta_init = 2;
  int ta_step = 2;
  int ta_star = 30;
  int p_a = 3;
  int p_r = 4;

  int threshold(int ell, int iterations) const {
    if (ell > 2 * iterations - p_r) return ta_star;
    return ta_step * static_cast<int>(floor_div(ell - 1, p_a)) + ta_init;
  }
  void validate(int iterations) const;
};

/// Closed-form per-bit iteration count from the relative block-row depth
/// and block column; the tracked counters are authoritative, this is the
/// storage-free consistency check. Floors round toward -inf.
int ofec_iteration_closed_form(int64_t rel_depth, int block_col, bool buffer_row);

struct OfecParams {
  int iterations = 20;  // L: full decoding iterations per row
  OfecAnchorSchedule anchor;
  DrsParams drs;
  bool anchors_enabled = true;
  bool ibdd = false;
  bool spr = true;
  bool verify_tracking = false;  // enables the consistency cross-checks
};

/// Streaming encoder; consumes 3552 information bits per block-row pair and
/// produces the corresponding 4096 coded bits. Pre-stream history is all
/// zero, matching the decoder's warm-up assumption.
class OfecEncoder {
 public:
  OfecEncoder(const BchCode& component, const OfecLayout& layout);
  void reset();
  void encode_row_pair(std::span<const uint8_t> info, std::span<uint8_t> rows_out);
  int64_t rows_encoded() const { return next_row_; }

 private:
  void encode_row(std::span<const uint8_t> info, std::span<uint8_t> row_out);
  const BchCode* code_;
  const OfecLayout* layout_;
  std::vector<uint8_t> hist_;  // ring of the last kGapMax rows
  std::vector<uint8_t> info_buf_, cw_buf_;
  int64_t next_row_ = 0;
};

/// Sliding-window decoder. Each arriving row pair triggers one decoding
/// event: the back codewords of the rows at relative depths 6+20j and
/// 7+20j (j = 0..L-1, shallowest first) are decoded, every touched bit's
/// iteration counter advances, and per-bit anchor thresholds follow the
/// schedule. Rows retire after depth 20L+7, by which point every bit has
/// been decoded exactly 2L times (L in each role).
class OfecWindowDecoder {
 public:
  OfecWindowDecoder(const BchCode& component, const OfecLayout& layout, const OfecParams& params,
                    const DrsQuantizer& quantizer, uint64_t seed);
  void reset();
  void reset(uint64_t seed) {
    component_.reseed(seed);
    reset();
  }

  /// Feed one received row pair; returns the two decided rows leaving the
  /// window (valid until the next call), or empty while the pipeline fills.
  std::span<const uint8_t> push_row_pair(std::span<const float> magnitude,
                                         std::span<const uint8_t> hard);
  /// Block-row index of the first emitted row of the last push.
  int64_t emitted_rows_begin() const { return emitted_begin_; }

  int window_rows() const { return depth_; }

  // Diagnostics for tests.
  struct Stats {
    uint64_t codewords_decoded = 0;
    uint64_t clean_skips = 0;
    uint64_t spr_flips = 0;
    uint64_t tracking_mismatches = 0; // closed form vs counter, non-buffer bits
    uint64_t emission_ell_errors = 0; // bits leaving without exactly 2L touches
    std::vector<std::pair<int64_t, int>> spr_flip_log;  // kept under verify_tracking
  };
  const Stats& stats() const { return stats_; }

 private:
  static constexpr int kRowBits = OfecLayout::kRowBits;

  int slot_of(int64_t row) const { return static_cast<int>(pos_mod(row, depth_)); }
  void decode_back_codewords(int64_t row, int64_t newest);
  void apply_spr(int64_t row);
  void mark_dirty(int64_t row, int offset, int64_t newest);

  const BchCode* code_;
  OfecLayout layout_;
  OfecParams params_;
  const DrsQuantizer* quantizer_;
  ComponentDecoder component_;
  int depth_;  // ring rows = 20L + 8
  SoftBitField field_;
  std::vector<uint8_t> ell_;
  std::vector<uint8_t> cw_clean_;  // [slot][w]
  std::vector<int32_t> pos_;
  std::vector<int16_t> ta_;
  std::vector<int16_t> ta_table_;  // threshold per ell 1..2L
  std::vector<uint8_t> emitted_;
  int64_t next_row_ = 0;
  int64_t emitted_begin_ = -1;
  Stats stats_;
};

}  // namespace drsd

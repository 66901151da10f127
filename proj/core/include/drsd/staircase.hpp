#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "drsd/eaed.hpp"

namespace drsd {

/// Staircase construction constants for the 1-bit shortened [255,231] t=3
/// component: m x m blocks with m = n_c / 2, and for every i >= 1 each row
/// of [B_{i-1}^T | B_i] is a component codeword.
struct StaircaseCode {
  static constexpr int kBlockSize = 127;               // m
  static constexpr int kInfoCols = 103;                // k_c - m
  static constexpr int kBlockBits = kBlockSize * kBlockSize;
  static constexpr int kInfoBitsPerBlock = kBlockSize * kInfoCols;  // 13081
  static constexpr double kRate = 103.0 / 127.0;       // 0.811

  static BchCode make_component();  // [254,230] t=3 over GF(2^8)
};

/// Position-dependent anchor threshold: x is the distance of the bit's
/// block from the newest block of the decoding window.
int staircase_anchor_threshold(int x, int window = 7);

struct StaircaseParams {
  int window = 7;
  int iterations = 8;
  DrsParams drs;               // j_max = 1 for the conventional EaED
  bool anchors_enabled = true;
  bool ibdd = false;           // hard-decision baseline, same schedule
};

/// Streaming encoder; blocks are row-major m x m bit arrays.
class StaircaseEncoder {
 public:
  explicit StaircaseEncoder(const BchCode& component);
  void reset();
  /// info carries kInfoBitsPerBlock bits; out receives the new block.
  void encode_block(std::span<const uint8_t> info, std::span<uint8_t> out);

 private:
  const BchCode* code_;
  std::vector<uint8_t> prev_;
  std::vector<uint8_t> info_buf_, cw_buf_;
};

/// Sliding-window decoder. Every push runs `iterations` sweeps over the
/// adjacent block pairs inside the window (oldest pair first) and, once the
/// window is full, emits the oldest block. Bits of a component word take
/// their anchor threshold from their own block's window position.
class StaircaseWindowDecoder {
 public:
  StaircaseWindowDecoder(const BchCode& component, const StaircaseParams& params,
                         const DrsQuantizer& quantizer, uint64_t seed);
  void reset();
  void reset(uint64_t seed) {
    component_.reseed(seed);
    reset();
  }

  /// Feed one received block (magnitude + hard decision per bit, row-major).
  /// Returns the decided oldest block once the window is full, else an
  /// empty span. The returned storage is valid until the next call.
  std::span<const uint8_t> push_block(std::span<const float> magnitude,
                                      std::span<const uint8_t> hard);

  int64_t blocks_pushed() const { return next_block_; }

 private:
  static constexpr int kM = StaircaseCode::kBlockSize;
  static constexpr int kBlockBits = StaircaseCode::kBlockBits;

  int slot_of(int64_t block) const { return static_cast<int>(block % params_.window); }
  void decode_pair(int64_t left, int64_t right, int64_t newest);
  void mark_bit_dirty(int64_t block, int row, int col, int64_t first, int64_t last);

  const BchCode* code_;
  StaircaseParams params_;
  const DrsQuantizer* quantizer_;
  ComponentDecoder component_;
  SoftBitField field_;                    // window slots, kBlockBits each
  std::vector<uint8_t> word_clean_;       // [slot][row]: pair ending at slot is a codeword
  std::vector<int32_t> pos_;
  std::vector<int16_t> ta_;
  std::vector<uint8_t> emitted_;
  int64_t next_block_ = 0;  // index of the next block to receive (0 = known pad)
};

}  // namespace drsd

#pragma once
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "drsd/bch.hpp"
#include "drsd/quantizer.hpp"
#include "drsd/util.hpp"

namespace drsd {

// Per-bit flag bits shared by the windowed decoders.
inline constexpr uint8_t kFlagErased = 0x01;
inline constexpr uint8_t kFlagFrozen = 0x02;  // known bit, never flipped or erased
inline constexpr uint8_t kFlagSprFront = 0x04;
inline constexpr uint8_t kFlagSprBack = 0x08;

/// Flat per-bit decoder state. Component words address it through
/// position index maps (ComponentView); a field is owned by exactly one
/// decoder instance at a time.
struct SoftBitField {
  std::vector<uint8_t> bits;
  std::vector<uint8_t> flags;
  std::vector<int8_t> drs;

  void resize(size_t n) {
    bits.assign(n, 0);
    flags.assign(n, 0);
    drs.assign(n, 0);
  }
  size_t size() const { return bits.size(); }
};

/// One BDD output of an erasure test pattern: the candidate codeword plus
/// the positions where it contradicts the non-erased received decisions.
struct EaedCandidate {
  std::vector<uint8_t> word;
  std::array<uint16_t, 12> flips{};  // non-erased flip positions
  uint8_t num_flips = 0;
  uint8_t order = 0;  // test-pattern generation index, breaks distance ties

  std::span<const uint16_t> flip_positions() const { return {flips.data(), num_flips}; }
};

enum class EaedStatus : uint8_t {
  kZeroSyndrome,  // word had no erasures and zero syndrome
  kCandidates,    // one or more unique candidates, sorted by distance
  kFailure,       // no test pattern decoded
};

struct EaedScratch {
  std::vector<uint8_t> filled;
  std::vector<int32_t> erased_pos;
  std::array<std::vector<uint8_t>, 4> patterns;  // canonical pattern per pair
  std::array<EaedCandidate, 8> cand;
  int num_cand = 0;
  std::vector<int32_t> changed;  // local positions written by the last apply
};

/// Error-and-erasure decoding: fills the E erased positions with J distinct
/// complementary random pattern pairs (J = 1 if E = 1, else min(j_max, E)),
/// BDD-decodes the 2J test words, deduplicates, and orders candidates by
/// Hamming distance to y over the non-erased positions.
EaedStatus eaed_candidates(const BchCode& code, std::span<const uint8_t> y,
                           std::span<const uint8_t> flags, int j_max, Rng& rng,
                           EaedScratch& scratch);

/// Miscorrection detection: returns the index of the first candidate whose
/// flip set contains no anchor (frozen bit, or DRS > per-position threshold
/// when anchors are enabled), or -1 when every candidate is a miscorrection.
int md_select(std::span<const EaedCandidate> cands, std::span<const int8_t> drs,
              std::span<const int16_t> anchor_thresholds, std::span<const uint8_t> flags,
              bool anchors_enabled);

/// Outcome of one component-word pass.
enum class WordOutcome : uint8_t {
  kZeroSyndrome,    // codeword as received: every DRS bumped by one
  kAccepted,        // candidate written back, flipped DRS reduced by one
  kAllMiscorrected, // storage unchanged, c1's flipped DRS reduced by one
  kFailure,         // storage and DRS unchanged
};

/// The soft-aided component decoder: gathers a word from `field` through
/// `pos`, runs EaED + MD, applies the DRS update rules (all updates clipped
/// to [i_s, i_e]) and writes accepted candidates back. `anchor_thresholds`
/// supplies T_a per word position. Word positions written back to
/// storage are listed in scratch().changed for the caller's bookkeeping.
class ComponentDecoder {
 public:
  ComponentDecoder(const BchCode& code, const DrsParams& params, uint64_t seed);

  WordOutcome decode_drsd(SoftBitField& field, std::span<const int32_t> pos,
                          std::span<const int16_t> anchor_thresholds);

  /// Plain iterative-BDD step: decode and apply all flips, rejecting only
  /// outputs that contradict frozen (known) bits.
  WordOutcome decode_ibdd(SoftBitField& field, std::span<const int32_t> pos);

  /// Equivalent of a zero-syndrome pass on a word already known to be a
  /// clean codeword: bumps every non-frozen DRS by one.
  void bump_clean_word(SoftBitField& field, std::span<const int32_t> pos) const;

  bool anchors_enabled = true;

  /// Restarts the fill-pattern generator; used when a decoder instance is
  /// recycled for a new independently seeded stream.
  void reseed(uint64_t seed) { rng_ = Rng(seed); }

  const EaedScratch& scratch() const { return scratch_; }
  const DrsParams& params() const { return params_; }

 private:
  const BchCode* code_;
  DrsParams params_;
  Rng rng_;
  EaedScratch scratch_;
  std::vector<uint8_t> y_, yflags_;
  std::vector<int8_t> ydrs_;
};

}  // namespace drsd

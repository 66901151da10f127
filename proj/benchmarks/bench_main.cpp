#include <benchmark/benchmark.h>

#include "drsd/harness.hpp"
#include "drsd/util.hpp"

namespace {

using namespace drsd;

void BM_BddDecode255(benchmark::State& state) {
  BchCode code(GaloisField(8), 3, 1);
  Rng rng(1);
  std::vector<uint8_t> info(code.k());
  for (auto& b : info) b = rng.next_bit();
  auto cw = code.encode(info);
  const int errors = static_cast<int>(state.range(0));
  auto noisy = cw;
  for (int e = 0; e < errors; ++e) noisy[rng.next_below(code.n())] ^= 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(code.decode(noisy));
  }
}
BENCHMARK(BM_BddDecode255)->Arg(0)->Arg(1)->Arg(3);

void BM_EaedCandidates(benchmark::State& state) {
  BchCode code(GaloisField(8), 2, 0, true);
  Rng rng(2);
  std::vector<uint8_t> info(code.k());
  for (auto& b : info) b = rng.next_bit();
  auto cw = code.encode(info);
  std::vector<uint8_t> flags(code.n(), 0);
  const int erasures = static_cast<int>(state.range(0));
  for (int e = 0; e < erasures; ++e) flags[rng.next_below(code.n())] |= kFlagErased;
  EaedScratch scratch;
  Rng fill(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eaed_candidates(code, cw, flags, 3, fill, scratch));
  }
}
BENCHMARK(BM_EaedCandidates)->Arg(1)->Arg(4)->Arg(12);

void BM_ChannelTransmit(benchmark::State& state) {
  auto spec = ChannelSpec::from_esn0_db(3.0, 1.0);
  BiAwgnChannel chan(spec, 7);
  std::vector<uint8_t> bits(16384, 0), hard(bits.size());
  std::vector<float> mag(bits.size());
  for (auto _ : state) {
    chan.transmit(bits, hard, mag);
    benchmark::DoNotOptimize(hard.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(bits.size()));
}
BENCHMARK(BM_ChannelTransmit);

// One received staircase block through the full window schedule, waterfall
// operating point.
void BM_StaircaseBlock(benchmark::State& state) {
  RunConfig cfg;
  cfg.code = CodeKind::kStaircase;
  cfg.snr_db = {3.65};
  cfg.drs.erasure_threshold = 0.205;
  double esn0 = cfg.to_esn0_db(3.65);
  auto spec = ChannelSpec::from_esn0_db(esn0, 1.0);
  MagnitudeDistribution dist(spec);
  DrsQuantizer quant(cfg.drs, dist);
  BchCode code = StaircaseCode::make_component();
  StaircaseParams params;
  params.drs = cfg.drs;
  StaircaseEncoder enc(code);
  StaircaseWindowDecoder dec(code, params, quant, 5);
  BiAwgnChannel chan(spec, 6);
  Rng data(7);
  std::vector<uint8_t> info(StaircaseCode::kInfoBitsPerBlock), block(StaircaseCode::kBlockBits);
  std::vector<uint8_t> hard(block.size());
  std::vector<float> mag(block.size());
  for (auto _ : state) {
    for (auto& x : info) x = data.next_bit();
    enc.encode_block(info, block);
    chan.transmit(block, hard, mag);
    benchmark::DoNotOptimize(dec.push_block(mag, hard));
  }
  state.SetItemsProcessed(state.iterations() * StaircaseCode::kInfoBitsPerBlock);
}
BENCHMARK(BM_StaircaseBlock)->Unit(benchmark::kMillisecond);

void BM_OfecRowPair(benchmark::State& state) {
  RunConfig cfg;
  cfg.code = CodeKind::kOfec;
  cfg.drs.erasure_threshold = 0.10;
  auto spec = ChannelSpec::from_esn0_db(7.0, 1.0 / std::sqrt(2.0));
  MagnitudeDistribution dist(spec);
  DrsQuantizer quant(cfg.drs, dist);
  BchCode code = make_ofec_component();
  OfecLayout layout;
  OfecParams params;
  params.iterations = 20;
  params.drs = cfg.drs;
  OfecEncoder enc(code, layout);
  OfecWindowDecoder dec(code, layout, params, quant, 5);
  BiAwgnChannel chan(spec, 6);
  Rng data(7);
  std::vector<uint8_t> info(OfecLayout::kInfoPerRowPair), coded(2 * OfecLayout::kRowBits);
  std::vector<uint8_t> hard(coded.size());
  std::vector<float> mag(coded.size());
  for (auto _ : state) {
    for (auto& x : info) x = data.next_bit();
    enc.encode_row_pair(info, coded);
    chan.transmit(coded, hard, mag);
    benchmark::DoNotOptimize(dec.push_row_pair(mag, hard));
  }
  state.SetItemsProcessed(state.iterations() * OfecLayout::kInfoPerRowPair);
}
BENCHMARK(BM_OfecRowPair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

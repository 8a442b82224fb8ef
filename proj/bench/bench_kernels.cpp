#include <benchmark/benchmark.h>

#include <omp.h>
#include <random>

#include "chatud/aligner.hpp"
#include "chatud/chat.hpp"
#include "chatud/kernels.hpp"

using namespace chatud;

namespace {

// Roughly one utterance of decoder rows by 30 s of 20 ms frames.
AttentionMatrix make_matrix(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  AttentionMatrix m(rows, cols);
  for (auto& v : m.values) v = d(rng);
  return m;
}

void MeanCenterSerial(benchmark::State& st) {
  auto m = make_matrix(static_cast<std::size_t>(st.range(0)), 1500);
  for (auto _ : st) benchmark::DoNotOptimize(serial::mean_center(m));
}

void MeanCenterParallel(benchmark::State& st) {
  auto m = make_matrix(static_cast<std::size_t>(st.range(0)), 1500);
  for (auto _ : st) benchmark::DoNotOptimize(parallel::mean_center(m));
}

void MedianSerial(benchmark::State& st) {
  auto m = make_matrix(static_cast<std::size_t>(st.range(0)), 1500);
  for (auto _ : st) benchmark::DoNotOptimize(serial::median_filter_rows(m, 7));
}

void MedianParallel(benchmark::State& st) {
  auto m = make_matrix(static_cast<std::size_t>(st.range(0)), 1500);
  for (auto _ : st) benchmark::DoNotOptimize(parallel::median_filter_rows(m, 7));
}

// Word pass over many utterances; threads split utterances.
void WordPass(benchmark::State& st) {
  const std::size_t n_utts = 64, words = 12, frames = 300;
  std::string doc = "@Begin\n@Participants:\tCHI Target_Child\n";
  std::string line = "*CHI:\t";
  for (std::size_t w = 0; w < words; ++w) line += "word ";
  for (std::size_t u = 0; u < n_utts; ++u) doc += line + ".\n";
  doc += "@End\n";
  auto t = parse_chat(doc);
  std::vector<std::optional<align::UtteranceAttention>> att(n_utts);
  for (auto& a : att) {
    align::UtteranceAttention ua{make_matrix(words * 2, frames), {}};
    for (std::size_t w = 0; w < words; ++w) ua.groups.groups.push_back({"word", 2 * w, 2 * w + 2});
    a = std::move(ua);
  }
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(align::recover_word_times(t, att, {}));
}

}  // namespace

BENCHMARK(MeanCenterSerial)->Arg(64)->Arg(512);
BENCHMARK(MeanCenterParallel)->Arg(64)->Arg(512);
BENCHMARK(MedianSerial)->Arg(64)->Arg(512);
BENCHMARK(MedianParallel)->Arg(64)->Arg(512);
BENCHMARK(WordPass)->Arg(1)->Arg(4)->UseRealTime();

BENCHMARK_MAIN();

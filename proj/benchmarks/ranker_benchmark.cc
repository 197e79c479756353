// Copyright 2026 The Interest Storyboard Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "interest/ranker.h"

namespace interest {
namespace {

struct Games {
  std::vector<ImageId> ids;
  std::vector<Comparison> comparisons;
};

Games RandomGames(std::size_t images, std::size_t games) {
  std::mt19937_64 rng(1);
  Games out;
  for (std::size_t i = 0; i < images; ++i) out.ids.push_back("i" + std::to_string(i));
  for (std::size_t k = 0; k < games; ++k) {
    const std::size_t a = rng() % images;
    std::size_t b = rng() % (images - 1);
    if (b >= a) ++b;
    Comparison c;
    c.winner_id = out.ids[a];
    c.loser_id = out.ids[b];
    out.comparisons.push_back(std::move(c));
  }
  return out;
}

void BM_InferEp(benchmark::State& state, EpApproximation approximation) {
  const Games g = RandomGames(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  EpOptions options;
  options.approximation = approximation;
  for (auto _ : state) {
    benchmark::DoNotOptimize(InferEp(g.comparisons, g.ids, {}, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK_CAPTURE(BM_InferEp, joint, EpApproximation::kJoint)
    ->Args({50, 250})
    ->Args({200, 1000})
    ->Args({500, 3000})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_InferEp, factorized, EpApproximation::kFactorized)
    ->Args({50, 250})
    ->Args({200, 1000})
    ->Args({500, 3000})
    ->Args({4000, 15000})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace interest

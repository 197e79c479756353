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
#include <vector>

#include "benchmark/benchmark.h"
#include "interest/storyboard.h"

namespace interest {
namespace {

void BM_SelectTopSpaced(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (auto& s : scores) s = normal(rng);
  StoryboardSpec spec;
  spec.n_images = 24;
  spec.min_separation = 50;
  for (auto _ : state) benchmark::DoNotOptimize(SelectTopSpacedIndices(scores, spec));
}
BENCHMARK(BM_SelectTopSpaced)->Arg(4000)->Arg(100000);

void BM_AverageLinkage(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd pts(n, 16);
  for (auto& x : pts.reshaped()) x = normal(rng);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
  }
  for (auto _ : state) benchmark::DoNotOptimize(AverageLinkageLabels(d, 24));
}
BENCHMARK(BM_AverageLinkage)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace interest

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

#include "benchmark/benchmark.h"
#include "interest/gp_smoother.h"

namespace interest {
namespace {

struct Fixture {
  FeatureStore store;
  InterestPosterior posterior;
};

Fixture RandomFixture(std::size_t n, Eigen::Index dim) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Fixture f;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd v(dim);
    for (auto& x : v) x = normal(rng);
    const std::string id = "i" + std::to_string(i);
    f.store.Add({id, "", v});
    f.posterior.ids.push_back(id);
    f.posterior.means.push_back(normal(rng));
    f.posterior.variances.push_back(0.5);
  }
  return f;
}

void BM_KernelMatrix(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd rows(n, 2048);
  for (auto& x : rows.reshaped()) x = normal(rng);
  rows.rowwise().normalize();
  for (auto _ : state) benchmark::DoNotOptimize(KernelMatrix(rows, 1.0));
}
BENCHMARK(BM_KernelMatrix)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GpFit(benchmark::State& state) {
  const Fixture f = RandomFixture(static_cast<std::size_t>(state.range(0)), 2048);
  for (auto _ : state) benchmark::DoNotOptimize(GpModel::Fit(f.store, f.posterior));
}
BENCHMARK(BM_GpFit)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GpSmoothAll(benchmark::State& state) {
  const Fixture f = RandomFixture(static_cast<std::size_t>(state.range(0)), 2048);
  const GpModel model = GpModel::Fit(f.store, f.posterior);
  for (auto _ : state) benchmark::DoNotOptimize(model.SmoothAll());
}
BENCHMARK(BM_GpSmoothAll)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace interest

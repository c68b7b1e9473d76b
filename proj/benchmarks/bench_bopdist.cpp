// Copyright 2026 The bopdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bopdist/bop_model.hpp"
#include "bopdist/distance.hpp"
#include "bopdist/kernel.hpp"
#include "bopdist/oracle.hpp"

namespace {

using bopdist::Graph;
using bopdist::Matrix;

// Ring plus random chords, unit-ish affinities, symmetric.
Graph ring_with_chords(std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  std::uniform_real_distribution<double> affinity(0.5, 2.0);
  Matrix a = Matrix::Zero(n, n);
  auto link = [&](std::int64_t i, std::int64_t j) {
    if (i == j) return;
    a(i, j) = a(j, i) = affinity(rng);
  };
  for (std::int64_t i = 0; i < n; ++i) link(i, (i + 1) % n);
  for (std::int64_t e = 0; e < 2 * n; ++e) link(pick(rng), pick(rng));
  return Graph::build(a);
}

void BM_BuildModel(benchmark::State& state) {
  const Graph g = ring_with_chords(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bopdist::BopModel::build(g, 1.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildModel)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_PotentialDistance(benchmark::State& state) {
  const bopdist::BopModel m =
      bopdist::BopModel::build(ring_with_chords(state.range(0), 2), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bopdist::potential_distance(m));
  }
}
BENCHMARK(BM_PotentialDistance)->RangeMultiplier(2)->Range(32, 512);

void BM_SurprisalDistance(benchmark::State& state) {
  const bopdist::BopModel m =
      bopdist::BopModel::build(ring_with_chords(state.range(0), 3), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bopdist::surprisal_distance(m));
  }
}
BENCHMARK(BM_SurprisalDistance)->RangeMultiplier(2)->Range(32, 512);

void BM_PotentialToTarget(benchmark::State& state) {
  const Graph g = ring_with_chords(state.range(0), 4);
  const double theta = static_cast<double>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bopdist::potential_to_target(g, theta, 0));
  }
}
BENCHMARK(BM_PotentialToTarget)
    ->ArgsProduct({{32, 128, 512}, {1, 20, 1000}});

void BM_KernelEmbedding(benchmark::State& state) {
  const bopdist::DistanceMatrix d = bopdist::potential_distance(
      bopdist::BopModel::build(ring_with_chords(state.range(0), 5), 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bopdist::top_eigenvectors(bopdist::distance_to_kernel(d), 5));
  }
}
BENCHMARK(BM_KernelEmbedding)->RangeMultiplier(2)->Range(32, 512);

void BM_Enumerate(benchmark::State& state) {
  const Graph g = ring_with_chords(6, 6);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bopdist::oracle::enumerate_path_mass(g, 1.0, 0, 3, depth, false));
  }
}
BENCHMARK(BM_Enumerate)->DenseRange(4, 10, 2);

}  // namespace

BENCHMARK_MAIN();

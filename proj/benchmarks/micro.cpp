#include <benchmark/benchmark.h>

#include <vector>

#include "pcd/bvh.hpp"
#include "pcd/gjk.hpp"
#include "pcd/hull.hpp"
#include "pcd/minkowski.hpp"
#include "pcd/prob_bound.hpp"
#include "pcd/query.hpp"
#include "pcd/rng.hpp"

namespace {

using namespace pcd;

std::vector<Vec3> cloud(std::uint64_t seed, int n, const Vec3& offset = {}) {
  CounterRng rng(seed, 0);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.next_normal3() * 0.1 + offset);
  return pts;
}

TriMesh ellipsoid_mesh(int subdivisions, const Vec3& center) {
  const ConvexPolytope p = icosphere(subdivisions);
  TriMesh m;
  for (const Vec3& v : p.vertices()) m.vertices.push_back(Vec3{0.5 * v.x, 0.3 * v.y, 0.2 * v.z} + center);
  m.triangles = p.faces();
  return m;
}

const GaussianError kError = GaussianError::axes({0.01, 0.03, 0.05}, random_rotation(1));

void BM_ConvexHull(benchmark::State& state) {
  const auto pts = cloud(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Gjk(benchmark::State& state) {
  const ConvexPolytope a = convex_hull(cloud(2, static_cast<int>(state.range(0))));
  const ConvexPolytope b = convex_hull(cloud(3, static_cast<int>(state.range(0)), {0.6, 0.1, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(gjk_distance(a, b));
}
BENCHMARK(BM_Gjk)->Arg(16)->Arg(64)->Arg(256);

void BM_MinkowskiGeneral(benchmark::State& state) {
  const ConvexPolytope a = convex_hull(cloud(4, static_cast<int>(state.range(0))));
  const ConvexPolytope b = convex_hull(cloud(5, static_cast<int>(state.range(0)), {0.6, 0, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum_general(a.negated(), b));
}
BENCHMARK(BM_MinkowskiGeneral)->Arg(16)->Arg(64)->Arg(256);

void BM_MinkowskiBoxes(benchmark::State& state) {
  const Box a = Box::from_axes({}, random_rotation(6), {0.1, 0.2, 0.3});
  const Box b = Box::from_axes({0.8, 0, 0}, random_rotation(7), {0.3, 0.1, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum_boxes(a, b));
}
BENCHMARK(BM_MinkowskiBoxes);

void BM_MinkowskiKdop(benchmark::State& state) {
  const Kdop26 a = Kdop26::fit(cloud(8, 64)), b = Kdop26::fit(cloud(9, 64, {0.6, 0, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum_kdop(a.negated(), b).to_polytope());
}
BENCHMARK(BM_MinkowskiKdop);

// Pair bound per bounding-volume type, fitted to the same two point clouds.
void BM_ConvexPcd(benchmark::State& state) {
  const auto type = static_cast<BvType>(state.range(0));
  const auto pa = cloud(10, 64), pb = cloud(11, 64, {0.5, 0.05, 0});
  const ConvexShape a = to_convex_shape(fit_bv(pa, type));
  const ConvexShape b = to_convex_shape(fit_bv(pb, type));
  for (auto _ : state) benchmark::DoNotOptimize(convex_pcd(a, b, kError));
  state.SetLabel(to_string(type));
}
BENCHMARK(BM_ConvexPcd)->DenseRange(0, 4);

void BM_GeneralPcd(benchmark::State& state) {
  const auto type = static_cast<BvType>(state.range(0));
  const TriMesh a = ellipsoid_mesh(3, {}), b = ellipsoid_mesh(3, {1.05, 0.1, 0});
  const BvhTree ta = build_bvh(a, type, 16), tb = build_bvh(b, type, 16);
  for (auto _ : state) benchmark::DoNotOptimize(general_pcd({ta, tb, kError}));
  state.SetLabel(to_string(type));
}
BENCHMARK(BM_GeneralPcd)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_BuildBvh(benchmark::State& state) {
  const auto type = static_cast<BvType>(state.range(0));
  const TriMesh m = ellipsoid_mesh(4, {});
  for (auto _ : state) benchmark::DoNotOptimize(build_bvh(m, type, 4));
  state.SetLabel(to_string(type));
}
BENCHMARK(BM_BuildBvh)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <memory>

#include <benchmark/benchmark.h>

#include <capax/bem.hpp>
#include <capax/conformal.hpp>
#include <capax/field.hpp>
#include <capax/geometry.hpp>
#include <capax/level.hpp>
#include <capax/sampling.hpp>

namespace {

capax::DomainSpec ellipsoid() { return capax::parse_domain_spec(R"({"kind": "ellipsoid", "a": 2, "b": 1, "c": 1})"); }

std::shared_ptr<const capax::BemField> ellipsoid_field(int level) {
  static std::shared_ptr<const capax::BemField> cache[7];
  if (!cache[level])
    cache[level] = std::make_shared<const capax::BemField>(capax::assemble_and_solve(
        std::make_shared<const capax::SurfaceMesh>(capax::build_mesh(ellipsoid(), level))));
  return cache[level];
}

void BM_BuildMesh(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(capax::build_mesh(ellipsoid(), level));
}
BENCHMARK(BM_BuildMesh)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_AssembleMatrix(benchmark::State& state) {
  const capax::SurfaceMesh mesh = capax::build_mesh(ellipsoid(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capax::assemble_matrix(mesh));
  state.counters["panels"] = static_cast<double>(mesh.size());
}
BENCHMARK(BM_AssembleMatrix)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_AssembleAndSolve(benchmark::State& state) {
  const auto mesh =
      std::make_shared<const capax::SurfaceMesh>(capax::build_mesh(ellipsoid(), static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(capax::assemble_and_solve(mesh));
}
BENCHMARK(BM_AssembleAndSolve)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_FieldSample(benchmark::State& state) {
  const auto f = ellipsoid_field(static_cast<int>(state.range(0)));
  const auto pts = capax::exterior_points(256, 1, 1.3, 4.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const Eigen::Vector3d d = pts[i++ % pts.size()];
    benchmark::DoNotOptimize(f->sample(Eigen::VectorXd(d.normalized() * d.norm() * 2.0)));
  }
}
BENCHMARK(BM_FieldSample)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

void BM_FieldValueGrad(benchmark::State& state) {
  const auto f = ellipsoid_field(static_cast<int>(state.range(0)));
  const Eigen::VectorXd x = Eigen::Vector3d(3.0, 0.5, -0.4);
  for (auto _ : state) benchmark::DoNotOptimize(f->value_grad(x));
}
BENCHMARK(BM_FieldValueGrad)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

void BM_Lift(benchmark::State& state) {
  const capax::FieldSample s = ellipsoid_field(3)->sample(Eigen::Vector3d(3.0, 0.5, -0.4));
  for (auto _ : state) benchmark::DoNotOptimize(capax::lift(s));
}
BENCHMARK(BM_Lift);

void BM_ExtractLevel(benchmark::State& state) {
  const auto f = ellipsoid_field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capax::extract_level(f, 0.3));
}
BENCHMARK(BM_ExtractLevel)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

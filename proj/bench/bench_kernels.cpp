// Serial reference vs OpenMP kernels on the Table 1 problem size.
#include <benchmark/benchmark.h>

#include "mdgs/experiment.hpp"

namespace {

struct Fixture {
  mdgs::FineMesh fine = mdgs::build_fine_mesh(128);
  mdgs::CoarseMesh coarse = mdgs::build_coarse_mesh(fine, 8);
  mdgs::CoefficientField field = mdgs::binary_inclusions(fine, coarse, 1e6);
  mdgs::SparseOperator a = mdgs::assemble_operator(fine, field, 4.0);
  mdgs::CoarseSpace space = mdgs::build_coarse_space(fine, coarse, field, mdgs::BasisType::kMsLinear);
  mdgs::SubdomainPartition partition = mdgs::build_partition(fine, coarse, 2);
  mdgs::SchwarzPreconditioner precond{a, &space, partition, mdgs::SchwarzMethod::kOverlapping};
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(a.dim(), -1.0, 1.0);
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

mdgs::Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? mdgs::Execution::kSerial : mdgs::Execution::kParallel;
}

void BM_Spmv(benchmark::State& state) {
  auto& f = fixture();
  Eigen::VectorXd y;
  for (auto _ : state) {
    f.a.apply(f.x, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_SchwarzApply(benchmark::State& state) {
  auto& f = fixture();
  Eigen::VectorXd z;
  for (auto _ : state) {
    f.precond.apply(f.x, z, exec_of(state));
    benchmark::DoNotOptimize(z.data());
  }
}

void BM_Pcg(benchmark::State& state) {
  auto& f = fixture();
  Eigen::VectorXd sol;
  mdgs::SolveOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) {
    auto report = mdgs::pcg(f.a, f.precond, f.x, sol, opts);
    benchmark::DoNotOptimize(report.iterations);
  }
}

void BM_CoarseSpace(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    auto space = mdgs::build_coarse_space(f.fine, f.coarse, f.field, mdgs::BasisType::kMsOscillatory);
    benchmark::DoNotOptimize(space.energies.data());
  }
}

}  // namespace

BENCHMARK(BM_Spmv)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_SchwarzApply)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_Pcg)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoarseSpace)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

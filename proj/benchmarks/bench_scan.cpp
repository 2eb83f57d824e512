// Hot-path benchmarks: profile scans, bootstrap draws, and the kernel
// scale factor on synthetic data of realistic sizes.

#include <benchmark/benchmark.h>

#include <threshreg/bootstrap.hpp>
#include <threshreg/detail/boot_engine.hpp>
#include <threshreg/detail/scan.hpp>
#include <threshreg/grid.hpp>
#include <threshreg/inference.hpp>
#include <threshreg/kernel.hpp>
#include <threshreg/montecarlo.hpp>

using namespace threshreg;

namespace {

Dataset make_data(int n) {
  return simulate_design(McDesign::design_B(n), {7, 0});
}

void bm_lse_scan(benchmark::State& state) {
  const Dataset ds = make_data(static_cast<int>(state.range(0)));
  const auto grid = threshold_grid(ds);
  const auto sd = detail::SortedData::make(ds);
  const auto cs = detail::CandidateSet::make(sd, grid);
  detail::LseWorkspace ws;
  for (auto _ : state) {
    const auto res = detail::lse_scan(sd, cs, ds.y(), ws, true);
    benchmark::DoNotOptimize(res.profile.data());
  }
  state.SetItemsProcessed(state.iterations() * cs.size());
}

void bm_clse_scan(benchmark::State& state) {
  const Dataset ds = make_data(static_cast<int>(state.range(0)));
  const auto grid = threshold_grid(ds);
  const auto hp = detail::HingePlan::make(ds, grid);
  detail::ClseWorkspace ws;
  for (auto _ : state) {
    const auto res = detail::clse_scan(hp, ds.y(), ws, true);
    benchmark::DoNotOptimize(res.profile.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int>(grid.size()));
}

void bm_grid_boot_draw(benchmark::State& state) {
  const Dataset ds = make_data(static_cast<int>(state.range(0)));
  const auto grid = threshold_grid(ds);
  const auto sd = detail::SortedData::make(ds);
  const auto cs = detail::CandidateSet::make(sd, grid);
  detail::LseWorkspace ws;
  const double a = default_bandwidth(ds);
  const auto ef = detail::eval_fit(sd, cs, ds.y(), ds.X(), ds.q(),
                                   KernelKind::epanechnikov, a, ws);
  const int target = cs.size() / 2;
  const Eigen::VectorXd fitted = detail::jump_fitted(
      ds.X(), ds.q(), ef.scan.beta, ef.scan.delta, cs.gammas[target]);
  Eigen::VectorXd eta, ystar;
  std::uint64_t b = 0;
  for (auto _ : state) {
    const double v = detail::grid_boot_draw(
        sd, cs, target, fitted, ef.scan.residuals, ds.X(), ds.q(),
        KernelKind::epanechnikov, a, MultiplierDist::rademacher, {11, b++}, ws,
        eta, ystar);
    benchmark::DoNotOptimize(v);
  }
}

void bm_scale_factor(benchmark::State& state) {
  const Dataset ds = make_data(static_cast<int>(state.range(0)));
  const FitUnconstrained fit = fit_lse(ds, threshold_grid(ds));
  for (auto _ : state) {
    const ScaleFactor sf = scale_factor(ds, fit, {});
    benchmark::DoNotOptimize(sf.xi_hat);
  }
}

void bm_continuity_bootstrap(benchmark::State& state) {
  const Dataset ds = make_data(250);
  const int B = static_cast<int>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) {
    const auto cb = continuity_test_bootstrap(ds, B, MultiplierDist::rademacher,
                                              {13, s++});
    benchmark::DoNotOptimize(cb.p_qn);
  }
  state.SetItemsProcessed(state.iterations() * B);
}

}  // namespace

BENCHMARK(bm_lse_scan)->Arg(250)->Arg(1000);
BENCHMARK(bm_clse_scan)->Arg(250)->Arg(1000);
BENCHMARK(bm_grid_boot_draw)->Arg(250)->Arg(1000);
BENCHMARK(bm_scale_factor)->Arg(250)->Arg(1000);
BENCHMARK(bm_continuity_bootstrap)->Arg(99);

BENCHMARK_MAIN();

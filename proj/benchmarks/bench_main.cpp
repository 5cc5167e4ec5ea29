#include <benchmark/benchmark.h>

#include "sesc/averaged.hpp"
#include "sesc/controller.hpp"
#include "sesc/delay_line.hpp"
#include "sesc/dither.hpp"
#include "sesc/presets.hpp"

using namespace sesc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ClosedLoop make_loop(ControlMode mode, double d1, double d2) {
  Matrix hessian(2, 2);
  hessian << -2.0, -2.0, -2.0, -4.0;
  StaticQuadraticMap map(5.0, vec2(0.0, 1.0), hessian);
  DitherParams dither;
  dither.amplitudes = Vector::Constant(2, 0.22);
  dither.omega = 5.0;
  dither.phase = PhaseModel::Wiener;
  ControllerConfig ctrl;
  ctrl.mode = mode;
  ctrl.c = 20.0;
  ctrl.k_diag = Vector::Constant(2, 0.005);
  SimParams sim;
  sim.dt = 1e-3;
  sim.t_final = 1.0;
  sim.theta_hat0 = vec2(1.0, 0.0);
  return ClosedLoop(map, dither, vec2(d1, d2), ctrl, sim, 1);
}

void ClassicStep(benchmark::State& state) {
  ClosedLoop loop = make_loop(ControlMode::Classic, 0.0, 0.0);
  for (auto _ : state) {
    loop.step();
    benchmark::DoNotOptimize(loop.output());
  }
}
BENCHMARK(ClassicStep);

void PredictorStepLongDelays(benchmark::State& state) {
  ClosedLoop loop = make_loop(ControlMode::Predictor, 50.0, 100.0);
  for (auto _ : state) {
    loop.step();
    benchmark::DoNotOptimize(loop.output());
  }
}
BENCHMARK(PredictorStepLongDelays);

void DitherAdvance(benchmark::State& state) {
  DitherParams params;
  params.amplitudes = Vector::Constant(state.range(0), 0.22);
  params.omega = 5.0;
  DitherState dither(params, 1);
  for (auto _ : state) {
    dither.advance(params, 1e-3);
    benchmark::DoNotOptimize(dither.eta());
  }
}
BENCHMARK(DitherAdvance)->Arg(2)->Arg(8)->Arg(32);

void DelayLinePushTracked(benchmark::State& state) {
  DelayLine line(1e-3, 100.0, 0.0);
  line.track_window(100.0);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    line.push(x);
    benchmark::DoNotOptimize(line.tracked_window_integral(100.0));
  }
}
BENCHMARK(DelayLinePushTracked);

void WindowIntegralFresh(benchmark::State& state) {
  const double delay = static_cast<double>(state.range(0));
  DelayLine line(1e-3, delay, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(line.window_integral(delay));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(WindowIntegralFresh)->Arg(1)->Arg(10)->Arg(100)->Complexity();

void AveragedStep(benchmark::State& state) {
  Matrix hessian(2, 2);
  hessian << -2.0, -2.0, -2.0, -4.0;
  AveragedSystem sys(hessian, Vector::Constant(2, 0.005), 20.0,
                     vec2(50.0, 100.0), static_cast<int>(state.range(0)),
                     0.02);
  auto s = sys.initial(vec2(1.0, -1.0));
  for (auto _ : state) {
    sys.step(s);
    benchmark::DoNotOptimize(s.u_boundary);
  }
}
BENCHMARK(AveragedStep)->Arg(100)->Arg(200)->Arg(400);

}  // namespace

BENCHMARK_MAIN();

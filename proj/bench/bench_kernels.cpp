// Serial reference vs OpenMP kernels.
#include <aimkit/dma.h>
#include <aimkit/partition.h>
#include <benchmark/benchmark.h>

using namespace aimkit;
using kernels::Exec;

namespace {

struct Molecule {
  std::vector<Atom> atoms;
  AnalyticDensity density;
};

// four centers in a bent chain
Molecule chain() {
  Molecule m;
  const Vec3 pos[] = {{0, 0, 0}, {1.8, 0.4, 0}, {3.5, -0.3, 0.6}, {5.1, 0.2, 0.1}};
  for (int a = 0; a < 4; ++a) {
    m.atoms.push_back({"H", 1, pos[a]});
    m.density.terms.push_back({AnalyticTerm::Kind::slater_s, pos[a], 1.6 + 0.2 * a, 1.0});
  }
  return m;
}

const grid::AtomicGridSet &grids() {
  static const auto m = chain();
  static const grid::AtomicGridSet g = [] {
    grid::GridSpec spec;
    spec.base.nr = 150;
    spec.base.order = 302;
    return grid::AtomicGridSet(m.atoms, m.density, spec);
  }();
  return g;
}

std::vector<ProAtomModel> slater_proatoms() {
  std::vector<ProAtomModel> pro;
  for (int a = 0; a < 4; ++a)
    pro.push_back(SlaterShells{{2.0, 0.8}, {0.7, 0.3}});
  return pro;
}

void stockholder(benchmark::State &state, Exec exec) {
  const auto &g = grids();
  const auto pro = slater_proatoms();
  std::vector<double> share(g.atom(0).npoints());
  for (auto _ : state) {
    for (int a = 0; a < g.atom_count(); ++a) {
      share.resize(g.atom(a).npoints());
      benchmark::DoNotOptimize(kernels::stockholder_share(g, a, pro, share, exec));
    }
  }
}

GtoDensity gto_chain() {
  GtoDensity d;
  const auto m = chain();
  for (int a = 0; a < 4; ++a) {
    const Vec3 c = m.atoms[a].position;
    for (double e : {4.0, 1.1, 0.3})
      d.primitives.push_back(PrimitiveGaussian::make(c, 0, 0, e, a));
    for (int mm = -1; mm <= 1; ++mm)
      d.primitives.push_back(PrimitiveGaussian::make(c, 1, mm, 0.8, a));
  }
  const int n = static_cast<int>(d.primitives.size());
  d.P = Mat::Identity(n, n) * 0.1;
  for (int i = 0; i + 1 < n; ++i)
    d.P(i, i + 1) = d.P(i + 1, i) = 0.02;
  return d;
}

void dma_run(benchmark::State &state, Exec exec) {
  const auto d = gto_chain();
  const auto sites = dma::atom_and_bond_sites(chain().atoms);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        dma::run_dma(d, sites, dma::Strategy::stone, 4, exec).sites.size());
}

void isa_run(benchmark::State &state, Exec exec) {
  const auto m = chain();
  partition::Options opt;
  opt.exec = exec;
  opt.max_iter = 20;
  opt.keep_shares = false;
  opt.enforce_lyapunov = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        partition::run_partition(partition::Method::isa, m.atoms, m.density,
                                 grids(), {}, opt)
            .iterations);
}

} // namespace

BENCHMARK_CAPTURE(stockholder, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(stockholder, parallel, Exec::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(dma_run, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(dma_run, parallel, Exec::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(isa_run, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(isa_run, parallel, Exec::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

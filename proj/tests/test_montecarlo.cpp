#include "cdis/error.hpp"
#include "cdis/greens.hpp"
#include "cdis/montecarlo.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cdis;
using cplx = std::complex<double>;

TEST_CASE("SplitMix64 reference sequence") {
  SplitMix64 rng(0);
  CHECK(rng() == 0xe220a8397b1dcdafULL);
  CHECK(rng() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng() == 0x06c45d188009454fULL);

  auto a = SplitMix64::stream(42, 7), b = SplitMix64::stream(42, 7), c = SplitMix64::stream(42, 8);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
}

TEST_CASE("disorder draws") {
  SplitMix64 rng(2024);
  const Index n = 100000;

  const VectorXd cauchy = sample_disorder({Distribution::Cauchy, 1.0}, n, rng);
  std::vector<double> sorted(cauchy.data(), cauchy.data() + n);
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  CHECK(std::abs(sorted[n / 2]) < 0.02);
  // P(|xi| <= 1) = (atan(1) - atan(-1)) / pi = 1/2
  const double inside = double((cauchy.array().abs() <= 1.0).count()) / double(n);
  CHECK(std::abs(inside - 0.5) <= 0.01);

  const VectorXd uni = sample_disorder({Distribution::Uniform, 1.0}, n, rng);
  CHECK(uni.maxCoeff() < 1.0);
  CHECK(uni.minCoeff() > -1.0);
  CHECK(std::abs(uni.mean()) <= 0.01);

  const VectorXd gauss = sample_disorder({Distribution::Gaussian, 0.3}, n, rng);
  const double sd = std::sqrt((gauss.array() - gauss.mean()).square().sum() / double(n - 1));
  CHECK(sd == doctest::Approx(0.3).epsilon(0.02));

  CHECK_THROWS_AS(sample_disorder({Distribution::Cauchy, 0.0}, 3, rng), Error);
}

TEST_CASE("one realization with zero disorder is the clean resolvent") {
  const auto spec = assemble_huckel(build_topology(TopologyKind::Chain, 4), 0.0, 1.0, 0.1);
  const std::vector<double> ws{-1.0, 0.2, 1.5};
  const auto r = ensemble_average_fixed(spec, MatrixXd::Zero(4, 1), 0.05, ws, ElementSet::full());
  CHECK(r.n_samples == 1);
  CHECK(r.elements.size() == 10);
  std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.0));
  for (int i = 0; i + 1 < 4; ++i) rows[i][i + 1] = rows[i + 1][i] = 1.0;
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const auto ref = oracle::resolvent(rows, ws[k], 0.05, {0, 0, 0, 0});
    for (std::size_t e = 0; e < r.elements.size(); ++e)
      CHECK(std::abs(r.mean(Index(k), Index(e)) - ref[r.elements[e].row][r.elements[e].col]) < 1e-12);
  }
  CHECK(r.stderr_re.maxCoeff() == 0.0);
}

TEST_CASE("fixed draws respect the disorder mask") {
  CavityParams p;
  p.epsilon_c = 0.0;
  p.epsilon_a = 0.1;
  p.gamma = 0.1;
  p.n_molecules = 2;
  p.coupling = 0.3;
  const auto spec = assemble_cavity(p);
  MatrixXd draws(3, 1);
  draws << 5.0, -0.2, 0.4;  // the cavity entry must be ignored
  const std::vector<double> ws{-0.4, 0.3};
  const auto r = ensemble_average_fixed(spec, draws, 0.01, ws, ElementSet::diagonal());
  const std::vector<std::vector<double>> rows{{0.0, 0.3, 0.3}, {0.3, -0.1, 0.0}, {0.3, 0.0, 0.5}};
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const auto ref = oracle::resolvent(rows, ws[k], 0.01, {0, 0, 0});
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(r.mean(Index(k), i) - ref[i][i]) < 1e-12);
  }
}

TEST_CASE("single site: Cauchy average adds gamma to eta") {
  const HamiltonianSpec spec(MatrixXd::Zero(1, 1), 0.1, {true});
  EnsembleConfig cfg;
  cfg.n_samples = 100000;
  cfg.seed = 99;
  cfg.distribution = {Distribution::Cauchy, 0.1};
  cfg.eta = 0.05;
  const std::vector<double> ws{-0.5, 0.0, 0.5};
  const auto r = ensemble_average(spec, cfg, ws, ElementSet::diagonal());
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const cplx exact = 1.0 / cplx(ws[k], 0.15);
    const cplx m = r.mean(Index(k), 0);
    CHECK(std::abs(m.real() - exact.real()) <= 3 * r.stderr_re(Index(k), 0));
    CHECK(std::abs(m.imag() - exact.imag()) <= 3 * r.stderr_im(Index(k), 0));
  }
}

TEST_CASE("Gaussian disorder of the same scale is distinguishable") {
  const HamiltonianSpec spec(MatrixXd::Zero(1, 1), 0.1, {true});
  EnsembleConfig cfg;
  cfg.n_samples = 100000;
  cfg.seed = 3;
  cfg.distribution = {Distribution::Gaussian, 0.1};
  cfg.eta = 0.02;
  const auto r = ensemble_average(spec, cfg, {0.0}, ElementSet::diagonal());
  const cplx engine = 1.0 / cplx(0.0, 0.12);
  CHECK(std::abs(r.mean(0, 0).imag() - engine.imag()) > 3 * r.stderr_im(0, 0));
}

TEST_CASE("star(7) ensemble matches the complex-Hamiltonian engine") {
  const auto spec = assemble_huckel(build_topology(TopologyKind::Star, 7), 0.0, 1.0, 0.1);
  EnsembleConfig cfg;
  cfg.n_samples = 50000;
  cfg.seed = 7;
  cfg.distribution = {Distribution::Cauchy, 0.1};
  cfg.eta = 0.02;
  const std::vector<double> ws{-2.45, -1.0, 0.0, 0.3, 2.45};
  const auto r = ensemble_average(spec, cfg, ws, ElementSet::diagonal());
  const auto engine =
      averaged_greens(diagonalize(spec), spec, SpectralGrid<double>{ws, 0.02}, ElementSet::diagonal());
  int within = 0, cells = 0;
  double worst = 0;
  for (std::size_t k = 0; k < ws.size(); ++k)
    for (Index i = 0; i < 7; ++i) {
      const cplx d = r.mean(Index(k), i) - engine[k].values(i);
      const double zr = std::abs(d.real()) / r.stderr_re(Index(k), i);
      const double zi = std::abs(d.imag()) / r.stderr_im(Index(k), i);
      within += (zr <= 3) + (zi <= 3);
      cells += 2;
      worst = std::max({worst, zr, zi});
    }
  CHECK(double(within) / cells >= 0.95);
  CHECK(worst < 4.5);
}

TEST_CASE("ensemble statistics: determinism, thread independence, variance bound") {
  const auto spec = assemble_huckel(build_topology(TopologyKind::Ring, 5), 0.0, 1.0, 0.1);
  EnsembleConfig cfg;
  cfg.n_samples = 5000;
  cfg.seed = 123;
  cfg.distribution = {Distribution::Cauchy, 0.1};
  cfg.eta = 0.04;
  const std::vector<double> ws{-1.0, 0.0, 0.61};
  cfg.threads = 1;
  const auto a = ensemble_average(spec, cfg, ws, ElementSet::full());
  const auto b = ensemble_average(spec, cfg, ws, ElementSet::full());
  cfg.threads = 4;
  const auto c = ensemble_average(spec, cfg, ws, ElementSet::full());
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(a.stderr_re == c.stderr_re);
  CHECK(a.stderr_im == c.stderr_im);

  const double bound = 1.0 / (cfg.eta * cfg.eta);
  CHECK(a.variance_re.maxCoeff() <= bound);
  CHECK(a.variance_im.maxCoeff() <= bound);
  CHECK(a.stderr_re.minCoeff() >= 0.0);

  cfg.seed = 124;
  CHECK(ensemble_average(spec, cfg, ws, ElementSet::full()).mean != a.mean);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
  const HamiltonianSpec spec(MatrixXd::Zero(1, 1), 0.1, {true});
  EnsembleConfig cfg;
  cfg.seed = 5;
  cfg.eta = 0.05;
  cfg.distribution = {Distribution::Cauchy, 0.1};
  cfg.n_samples = 4096;
  const auto small = ensemble_average(spec, cfg, {0.07}, ElementSet::diagonal());
  cfg.n_samples = 16384;
  const auto large = ensemble_average(spec, cfg, {0.07}, ElementSet::diagonal());
  CHECK(small.stderr_im(0, 0) / large.stderr_im(0, 0) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("cavity Schur route reproduces a dense solve of the same realization") {
  CavityParams p;
  p.epsilon_c = 2.1;
  p.epsilon_a = 2.05;
  p.gamma = 0.05;
  p.n_molecules = 5;
  p.coupling = 0.04;
  EnsembleConfig cfg;
  cfg.n_samples = 1;
  cfg.seed = 77;
  cfg.distribution = {Distribution::Gaussian, 0.05};
  cfg.eta = 0.01;
  const std::vector<double> ws{1.9, 2.08, 2.3};
  const auto r = ensemble_cavity_greens(p, cfg, ws);

  auto rng = SplitMix64::stream(77, 0);
  const VectorXd xi = sample_disorder(cfg.distribution, 5, rng);
  std::vector<std::vector<double>> rows(6, std::vector<double>(6, 0.0));
  rows[0][0] = 2.1;
  for (int i = 1; i <= 5; ++i) {
    rows[i][i] = 2.05 + xi(i - 1);
    rows[0][i] = rows[i][0] = 0.04;
  }
  for (std::size_t k = 0; k < ws.size(); ++k) {
    const auto ref = oracle::resolvent(rows, ws[k], 0.01, std::vector<double>(6, 0.0));
    CHECK(std::abs(r.mean(Index(k), 0) - ref[0][0]) < 1e-12);
  }
}

TEST_CASE("peak width") {
  const Window<double> w{-1, 1, 4001};
  const auto xs = w.points();
  std::vector<double> ys;
  for (double x : xs) ys.push_back(0.1 / (x * x + 0.01));
  CHECK(std::abs(estimate_peak_width(xs, ys, -0.5, 0.5) - 0.2) <= w.step());
  CHECK_THROWS_WITH_AS(estimate_peak_width(xs, ys, 0.2, 0.9), doctest::Contains("PeakNotFound"),
                       Error);
  CHECK_THROWS_WITH_AS(estimate_peak_width(xs, ys, -0.05, 0.05),
                       doctest::Contains("UnresolvedWidth"), Error);
}

TEST_CASE("config validation") {
  EnsembleConfig cfg;
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.eta = 0.01;
  cfg.n_samples = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

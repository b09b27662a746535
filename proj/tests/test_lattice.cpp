#include "cdis/error.hpp"
#include "cdis/greens.hpp"
#include "cdis/lattice.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cdis;

namespace {
std::vector<std::vector<double>> to_rows(const MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}
}  // namespace

TEST_CASE("named topologies generate their canonical edges") {
  CHECK(build_topology(TopologyKind::Chain, 2).edges() == std::vector<Edge>{{0, 1}});
  CHECK(build_topology(TopologyKind::Chain, 1).edges().empty());

  const auto star = build_topology(TopologyKind::Star, 7);
  CHECK(star.edges().size() == 6);
  for (const auto& e : star.edges()) CHECK(e.i == 0);

  CHECK(build_topology(TopologyKind::Ring, 6).edges() ==
        std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  CHECK(build_topology(TopologyKind::Complete, 4).edges().size() == 6);
}

TEST_CASE("topology validation") {
  CHECK(code_of([] { build_topology(TopologyKind::Ring, 2); }) == ErrorCode::InvalidSize);
  CHECK(code_of([] { build_topology(TopologyKind::Chain, 0); }) == ErrorCode::InvalidSize);
  CHECK(code_of([] { build_topology(TopologyKind::Custom, 3); }) == ErrorCode::InvalidEdge);
  CHECK(code_of([] { build_topology(TopologyKind::Custom, 3, {{0, 3}}); }) == ErrorCode::InvalidEdge);
  CHECK(code_of([] { build_topology(TopologyKind::Custom, 3, {{1, 1}}); }) == ErrorCode::InvalidEdge);
  CHECK(code_of([] { build_topology(TopologyKind::Custom, 3, {{0, 1}, {1, 0}}); }) ==
        ErrorCode::InvalidEdge);
  const auto t = build_topology(TopologyKind::Custom, 4, {{0, 1}, {2, 3}});
  CHECK(t.adjacency()(3, 2) == 1.0);
  CHECK(t.adjacency()(1, 2) == 0.0);
}

TEST_CASE("huckel assembly") {
  const auto spec = assemble_huckel(build_topology(TopologyKind::Chain, 3), 0.0, 1.0, 0.1);
  MatrixXd expected(3, 3);
  expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(spec.h0() == expected);
  CHECK(spec.uniform_mask());
  CHECK(spec.gamma() == 0.1);

  const auto star = assemble_huckel(build_topology(TopologyKind::Star, 7), 0.0, 1.0, 0.1);
  CHECK(star.h0().row(0) == (Eigen::RowVectorXd(7) << 0, 1, 1, 1, 1, 1, 1).finished());

  const auto shifted = assemble_huckel(build_topology(TopologyKind::Ring, 4), -0.5, 2.0, 0.3);
  CHECK(shifted.onsite() == VectorXd::Constant(4, -0.5));
  CHECK(shifted.hopping() == 2.0);
}

TEST_CASE("assembled matrices are exactly symmetric") {
  for (auto kind : {TopologyKind::Chain, TopologyKind::Ring, TopologyKind::Star,
                    TopologyKind::Complete})
    for (Index n = 3; n < 12; ++n) {
      const auto spec = assemble_huckel(build_topology(kind, n), 0.3, -1.7, 0.1);
      CHECK((spec.h0() - spec.h0().transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  CHECK_THROWS_AS(HamiltonianSpec((MatrixXd(2, 2) << 0, 1, 2, 0).finished(), 0.1, {true, true}),
                  Error);
  CHECK_THROWS_AS(HamiltonianSpec(MatrixXd::Zero(2, 2), 0.0, {true, true}), Error);
}

TEST_CASE("star spectrum: brute-force characteristic polynomial") {
  const auto spec = assemble_huckel(build_topology(TopologyKind::Star, 7), 0.0, 1.0, 0.1);
  const auto rows = to_rows(spec.h0());
  // lambda^5 (lambda^2 - 6): vanishes at 0 and +-sqrt(6), and equals
  // 1 * (1 - 6) = -5 at lambda = 1.
  CHECK(std::abs(oracle::char_poly(rows, 0.0)) < 1e-12);
  CHECK(std::abs(oracle::char_poly(rows, std::sqrt(6.0))) < 1e-9);
  CHECK(std::abs(oracle::char_poly(rows, -std::sqrt(6.0))) < 1e-9);
  CHECK(std::abs(oracle::char_poly(rows, 1.0) - (-5.0)) < 1e-12);
  CHECK(std::abs(oracle::char_poly(rows, 2.0) - 32.0 * (4.0 - 6.0)) < 1e-9);

  const auto eig = diagonalize(spec);
  VectorXd expected(7);
  expected << -std::sqrt(6.0), 0, 0, 0, 0, 0, std::sqrt(6.0);
  CHECK((eig.eigenvalues - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ring and chain spectra against closed forms") {
  const auto ring = diagonalize(assemble_huckel(build_topology(TopologyKind::Ring, 6), 0, 1, 0.1));
  VectorXd expected(6);
  expected << -2, -1, -1, 1, 1, 2;
  CHECK((ring.eigenvalues - expected).cwiseAbs().maxCoeff() < 1e-12);

  for (Index n : {1, 2, 5, 17, 40}) {
    const auto chain =
        diagonalize(assemble_huckel(build_topology(TopologyKind::Chain, n), 0, 1, 0.1));
    std::vector<double> closed;
    for (Index m = 1; m <= n; ++m) closed.push_back(2 * std::cos(m * M_PI / double(n + 1)));
    std::sort(closed.begin(), closed.end());
    for (Index m = 0; m < n; ++m) CHECK(std::abs(chain.eigenvalues(m) - closed[m]) < 1e-10);
  }
}

TEST_CASE("cavity assembly") {
  CavityParams p;
  p.epsilon_c = 0;
  p.epsilon_a = 0;
  p.gamma = 0.1;
  p.n_molecules = 1;
  p.coupling = 1.0;
  const auto two = assemble_cavity(p);
  CHECK(two.h0() == (MatrixXd(2, 2) << 0, 1, 1, 0).finished());
  CHECK(two.disordered() == std::vector<bool>{false, true});
  CHECK_FALSE(two.uniform_mask());

  // Same pattern as V * adjacency(Star(N + 1)) plus the diagonal.
  p.epsilon_c = p.epsilon_a = 2.1;
  p.n_molecules = 6;
  p.coupling = 0.37;
  const auto cav = assemble_cavity(p);
  MatrixXd star = 0.37 * build_topology(TopologyKind::Star, 7).adjacency();
  star.diagonal().setConstant(2.1);
  CHECK(cav.h0() == star);

  p.coupling = std::nan("");
  CHECK(code_of([&] { assemble_cavity(p); }) == ErrorCode::InvalidCoupling);
}

TEST_CASE("cavity params: both coupling forms must agree") {
  CavityParams p;
  p.epsilon_c = p.epsilon_a = 2.1;
  p.gamma = 0.02;
  p.number_density = 1.16e25;
  p.v_tilde = 4.06e-14;
  CHECK(p.collective_coupling_sq() == doctest::Approx(0.019120976).epsilon(1e-12));

  p.n_molecules = 100;
  CHECK(p.molecule_coupling() == doctest::Approx(std::sqrt(0.019120976 / 100)).epsilon(1e-12));
  p.coupling = p.molecule_coupling();
  CHECK_NOTHROW(p.validate());
  p.coupling = *p.coupling * (1 + 1e-6);
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::InconsistentParams);
}

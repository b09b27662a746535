#pragma once

// Disorder-averaged resolvents. With Cauchy disorder of half-width gamma on
// every site, the ensemble average of (w - H)^-1 is the resolvent of the
// fixed complex matrix H0 - i*gamma*I, so one diagonalization of H0 gives
// the averaged Green's matrix at every frequency:
//
//   <G(w)> = U diag(1 / (w + i*eta + i*gamma - e_m)) U^T.
//
// When only some sites are disordered (the cavity photon is not) the shift
// is not proportional to the identity and solve_greens() is used instead.

#include "cdis/error.hpp"
#include "cdis/lattice.hpp"
#include "cdis/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <optional>
#include <span>
#include <vector>

namespace cdis {

template <typename Real = double>
struct SpectralGrid {
  std::vector<Real> omegas;
  Real eta = Real(0);

  void validate() const {
    if (omegas.empty()) fail(ErrorCode::InvalidArgument, "empty frequency grid");
    for (std::size_t k = 1; k < omegas.size(); ++k)
      if (!(omegas[k] > omegas[k - 1]))
        fail(ErrorCode::NonMonotonicGrid, "frequencies must be strictly increasing");
    if (!(eta >= Real(0))) fail(ErrorCode::InvalidArgument, "eta must be >= 0");
  }
};

/// Which Green's matrix entries to materialize.
struct Element {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const Element&, const Element&) = default;
};

class ElementSet {
 public:
  enum class Mode { Full, Diagonal, List };

  static ElementSet full() { return ElementSet(Mode::Full, {}); }
  static ElementSet diagonal() { return ElementSet(Mode::Diagonal, {}); }
  static ElementSet upper_triangle(Index n) {
    std::vector<Element> list;
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j) list.push_back({i, j});
    return ElementSet(Mode::List, std::move(list));
  }
  static ElementSet of(std::vector<Element> list) {
    return ElementSet(Mode::List, std::move(list));
  }

  Mode mode() const noexcept { return mode_; }

  /// Explicit element list for an n-site problem (empty for Full).
  std::vector<Element> resolve(Index n) const {
    std::vector<Element> out;
    switch (mode_) {
      case Mode::Full:
        break;
      case Mode::Diagonal:
        for (Index i = 0; i < n; ++i) out.push_back({i, i});
        break;
      case Mode::List:
        for (const auto& e : list_) {
          if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n)
            fail(ErrorCode::InvalidArgument, "element index out of range");
          out.push_back(e);
        }
        break;
    }
    return out;
  }

 private:
  ElementSet(Mode mode, std::vector<Element> list)
      : mode_(mode), list_(std::move(list)) {}
  Mode mode_;
  std::vector<Element> list_;
};

template <typename Real = double>
struct EigenSystem {
  Vector<Real> eigenvalues;   // ascending
  Matrix<Real> eigenvectors;  // columns
};

/// Green's matrix (or the requested entries) at one frequency.
template <typename Real = double>
struct GreensEvaluation {
  Real omega = Real(0);
  std::vector<Element> elements;            // empty when `matrix` holds everything
  ComplexVector<Real> values;               // aligned with `elements`
  std::optional<ComplexMatrix<Real>> matrix;

  /// G_ij, using symmetry G_ij = G_ji. Throws MissingElement.
  Complex<Real> at(Index i, Index j) const {
    if (matrix) return (*matrix)(i, j);
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const auto& e = elements[k];
      if ((e.row == i && e.col == j) || (e.row == j && e.col == i))
        return values(static_cast<Index>(k));
    }
    fail(ErrorCode::MissingElement, "G(" + std::to_string(i) + "," +
                                        std::to_string(j) + ") was not evaluated");
  }
};

template <typename Real>
EigenSystem<Real> diagonalize(const Matrix<Real>& h0) {
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(h0);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem<double> diagonalize(const HamiltonianSpec& spec);

/// Eigen route. `gamma` is applied to every site.
template <typename Real>
std::vector<GreensEvaluation<Real>> averaged_greens(
    const EigenSystem<Real>& eig, Real gamma, const SpectralGrid<Real>& grid,
    const ElementSet& elements = ElementSet::full()) {
  grid.validate();
  const Matrix<Real>& u = eig.eigenvectors;
  const Index n = u.rows();
  const auto list = elements.resolve(n);

  // products U_im U_jm, one row per requested element
  Matrix<Real> weights(static_cast<Index>(list.size()), n);
  for (std::size_t k = 0; k < list.size(); ++k)
    weights.row(static_cast<Index>(k)) =
        u.row(list[k].row).cwiseProduct(u.row(list[k].col));

  const Complex<Real> shift(Real(0), grid.eta + gamma);
  std::vector<GreensEvaluation<Real>> out;
  out.reserve(grid.omegas.size());
  ComplexVector<Real> d(n);
  for (Real w : grid.omegas) {
    for (Index m = 0; m < n; ++m) {
      const Complex<Real> denom = Complex<Real>(w - eig.eigenvalues(m)) + shift;
      if (denom == Complex<Real>(0))
        fail(ErrorCode::SingularResolvent,
             "frequency coincides with an eigenvalue and gamma = eta = 0");
      d(m) = Real(1) / denom;
    }
    GreensEvaluation<Real> ev;
    ev.omega = w;
    if (list.empty() && elements.mode() == ElementSet::Mode::Full) {
      ev.matrix = u.template cast<Complex<Real>>() * d.asDiagonal() * u.transpose();
    } else {
      ev.elements = list;
      ev.values = weights.template cast<Complex<Real>>() * d;
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<GreensEvaluation<double>> averaged_greens(
    const EigenSystem<double>& eig, const HamiltonianSpec& spec,
    const SpectralGrid<double>& grid,
    const ElementSet& elements = ElementSet::full());

/// Direct route: per frequency, LU of (w + i*eta) I - H0 + i*diag(shift).
/// `shift` holds the per-site imaginary broadening (gamma on disordered
/// sites, 0 elsewhere).
template <typename Real>
std::vector<GreensEvaluation<Real>> solve_greens(
    const Matrix<Real>& h0, const Vector<Real>& shift,
    const SpectralGrid<Real>& grid,
    const ElementSet& elements = ElementSet::full()) {
  grid.validate();
  const Index n = h0.rows();
  if (shift.size() != n) fail(ErrorCode::LengthMismatch, "shift vector size");
  const auto list = elements.resolve(n);
  const bool full = elements.mode() == ElementSet::Mode::Full;

  // columns needed to assemble the requested entries
  std::vector<Index> cols;
  std::vector<Index> col_slot(static_cast<std::size_t>(n), -1);
  for (const auto& e : list) {
    if (col_slot[static_cast<std::size_t>(e.col)] < 0) {
      col_slot[static_cast<std::size_t>(e.col)] = static_cast<Index>(cols.size());
      cols.push_back(e.col);
    }
  }
  ComplexMatrix<Real> rhs = ComplexMatrix<Real>::Zero(n, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    rhs(cols[c], static_cast<Index>(c)) = Complex<Real>(1);

  const ComplexMatrix<Real> base = -h0.template cast<Complex<Real>>();
  std::vector<GreensEvaluation<Real>> out;
  out.reserve(grid.omegas.size());
  for (Real w : grid.omegas) {
    ComplexMatrix<Real> a = base;
    for (Index i = 0; i < n; ++i)
      a(i, i) += Complex<Real>(w, grid.eta + shift(i));
    Eigen::PartialPivLU<ComplexMatrix<Real>> lu(a);
    const auto pivots = lu.matrixLU().diagonal();
    for (Index i = 0; i < n; ++i)
      if (pivots(i) == Complex<Real>(0))
        fail(ErrorCode::SingularMatrix, "shifted Hamiltonian is singular");

    GreensEvaluation<Real> ev;
    ev.omega = w;
    if (full) {
      ev.matrix = lu.inverse();
    } else {
      const ComplexMatrix<Real> x = lu.solve(rhs);
      ev.elements = list;
      ev.values.resize(static_cast<Index>(list.size()));
      for (std::size_t k = 0; k < list.size(); ++k)
        ev.values(static_cast<Index>(k)) =
            x(list[k].row, col_slot[static_cast<std::size_t>(list[k].col)]);
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<GreensEvaluation<double>> solve_greens(
    const HamiltonianSpec& spec, const SpectralGrid<double>& grid,
    const ElementSet& elements = ElementSet::full());

/// Dispatches to the eigen route for uniform masks and to the direct solve
/// otherwise.
std::vector<GreensEvaluation<double>> evaluate_greens(
    const HamiltonianSpec& spec, const SpectralGrid<double>& grid,
    const ElementSet& elements = ElementSet::full());

/// eta = 0 when every site carries gamma, 1e-3 * gamma otherwise.
double default_eta(const HamiltonianSpec& spec) noexcept;

/// rho_i(w) = -Im G_ii / pi. Rows are sites, columns follow the grid.
template <typename Real>
Matrix<Real> site_dos(const std::vector<GreensEvaluation<Real>>& greens, Index n_sites) {
  Matrix<Real> rho(n_sites, static_cast<Index>(greens.size()));
  for (std::size_t k = 0; k < greens.size(); ++k)
    for (Index i = 0; i < n_sites; ++i)
      rho(i, static_cast<Index>(k)) = -greens[k].at(i, i).imag() / pi_v<Real>;
  return rho;
}

template <typename Real>
Vector<Real> total_dos(const std::vector<GreensEvaluation<Real>>& greens, Index n_sites) {
  return site_dos(greens, n_sites).colwise().sum().transpose();
}

}  // namespace cdis

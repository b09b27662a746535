#pragma once

// Closed forms for one cavity mode coupled to N molecules whose excitation
// energies carry Cauchy disorder of half-width gamma. All quantities depend on
// the molecules only through the collective coupling g^2 = N V^2. The
// molecular denominators carry +i*gamma and no other regularizer; the cavity
// pole is shielded by Im Sigma < 0.

#include "cdis/cavity_params.hpp"
#include "cdis/error.hpp"
#include "cdis/types.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace cdis {

namespace constants {
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double speed_of_light = 299792458.0;             // m/s
inline constexpr double hbar = 1.054571817e-34;                   // J s
inline constexpr double elementary_charge = 1.602176634e-19;      // C
inline constexpr double debye = 3.33564e-30;                      // C m
}  // namespace constants

template <typename Real = double>
struct PolaritonPoles {
  Complex<Real> plus;   // Re plus >= Re minus
  Complex<Real> minus;
};

/// Sigma(w) = g^2 / (w - e_a + i*gamma).
template <typename Real = double>
Complex<Real> self_energy(const CavityParams& p, Real omega) {
  const Real g2 = Real(p.collective_coupling_sq());
  return g2 / Complex<Real>(omega - Real(p.epsilon_a), Real(p.gamma));
}

/// G_cc(w) = 1 / (w - e_c - Sigma(w)).
template <typename Real = double>
Complex<Real> g_cc(const CavityParams& p, Real omega) {
  return Real(1) / (Complex<Real>(omega - Real(p.epsilon_c)) - self_energy(p, omega));
}

/// Bright-state element <mol|G|mol>, |mol> = N^-1/2 sum_i |i>.
template <typename Real = double>
Complex<Real> g_mol_mol(const CavityParams& p, Real omega) {
  const Complex<Real> mol(omega - Real(p.epsilon_a), Real(p.gamma));
  return Complex<Real>(omega - Real(p.epsilon_c)) * g_cc(p, omega) / mol;
}

/// Roots of (w - e_c)(w - e_a + i*gamma) = g^2, principal square root,
/// labelled so that Re plus >= Re minus.
template <typename Real = double>
PolaritonPoles<Real> polariton_poles(const CavityParams& p) {
  const Real g2 = Real(p.collective_coupling_sq());
  const Complex<Real> half_sum(Real(p.epsilon_a + p.epsilon_c) / 2, -Real(p.gamma) / 2);
  const Complex<Real> half_diff(Real(p.epsilon_c - p.epsilon_a) / 2, -Real(p.gamma) / 2);
  const Complex<Real> root = std::sqrt(Complex<Real>(g2) + half_diff * half_diff);
  PolaritonPoles<Real> poles{half_sum + root, half_sum - root};
  if (poles.plus.real() < poles.minus.real()) std::swap(poles.plus, poles.minus);
  return poles;
}

template <typename Real, typename Grid, typename F>
Vector<Real> map_grid(const Grid& grid, F&& f) {
  Vector<Real> out(static_cast<Index>(std::size(grid)));
  for (Index k = 0; k < out.size(); ++k) out(k) = f(Real(grid[static_cast<std::size_t>(k)]));
  return out;
}

/// Cavity density of states -Im G_cc / pi.
template <typename Real = double, typename Grid>
Vector<Real> rho_c(const CavityParams& p, const Grid& grid) {
  return map_grid<Real>(grid, [&](Real w) { return -g_cc(p, w).imag() / pi_v<Real>; });
}

/// Change of the molecular density of states caused by the coupling:
/// -Im(g^2 G_cc (w + i*gamma - e_a)^-2) / pi.
template <typename Real = double, typename Grid>
Vector<Real> delta_rho_m(const CavityParams& p, const Grid& grid) {
  const Real g2 = Real(p.collective_coupling_sq());
  return map_grid<Real>(grid, [&](Real w) {
    const Complex<Real> mol(w - Real(p.epsilon_a), Real(p.gamma));
    return -(g2 * g_cc(p, w) / (mol * mol)).imag() / pi_v<Real>;
  });
}

/// rho_c + delta_rho_m.
template <typename Real = double, typename Grid>
Vector<Real> delta_rho_t(const CavityParams& p, const Grid& grid) {
  return rho_c<Real>(p, grid) + delta_rho_m<Real>(p, grid);
}

/// Absorption cross-section per molecule in m^2:
///   alpha_1(w) = -w |mu|^2 Im G_mol,mol(w) / (eps0 c hbar).
/// With w in eV and G in 1/eV the energy unit cancels, so only the dipole
/// needs SI conversion. Multiply by N for the total, or by the number density
/// for the absorption coefficient (1/m). Throws MissingDipole.
template <typename Real = double, typename Grid>
Vector<Real> absorption(const CavityParams& p, const Grid& grid) {
  if (!p.mu_debye) fail(ErrorCode::MissingDipole, "transition dipole not given");
  if (*p.mu_debye < 0) fail(ErrorCode::InvalidArgument, "dipole must be >= 0");
  const double mu = *p.mu_debye * constants::debye;
  const Real prefactor = Real(mu * mu / (constants::vacuum_permittivity *
                                         constants::speed_of_light * constants::hbar));
  return map_grid<Real>(grid, [&](Real w) {
    return -prefactor * w * g_mol_mol(p, w).imag();
  });
}

}  // namespace cdis

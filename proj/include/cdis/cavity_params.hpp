#pragma once

#include <optional>

namespace cdis {

/// Inputs of the single-mode cavity model, energies in eV.
///
/// The collective coupling N V^2 = (number density) * Vtilde^2 can be given
/// either way: by molecule count and per-molecule coupling V, or by number
/// density (m^-3) and Vtilde (eV m^{3/2}). When both are present they must
/// agree to 1e-9 relative.
struct CavityParams {
  double epsilon_c = 0.0;
  double epsilon_a = 0.0;
  double gamma = 0.1;

  std::optional<long> n_molecules;
  std::optional<double> coupling;        // V, eV
  std::optional<double> number_density;  // m^-3
  std::optional<double> v_tilde;         // eV m^{3/2}
  std::optional<double> mu_debye;

  /// N V^2 in eV^2.
  double collective_coupling_sq() const;

  /// Per-molecule V, derived from the collective coupling if only the
  /// density form was given. Requires n_molecules.
  double molecule_coupling() const;

  /// Throws InvalidArgument, InvalidCoupling or InconsistentParams.
  void validate() const;
};

}  // namespace cdis

#include "cdis/cavity_params.hpp"

#include "cdis/error.hpp"

#include <cmath>

namespace cdis {

namespace {
bool finite(const std::optional<double>& x) { return !x || std::isfinite(*x); }
}  // namespace

double CavityParams::collective_coupling_sq() const {
  if (number_density && v_tilde) return *number_density * *v_tilde * *v_tilde;
  if (n_molecules && coupling) return double(*n_molecules) * *coupling * *coupling;
  fail(ErrorCode::InvalidArgument,
       "cavity coupling needs (n_molecules, coupling) or (number_density, v_tilde)");
}

double CavityParams::molecule_coupling() const {
  if (coupling) return *coupling;
  if (!n_molecules) fail(ErrorCode::InvalidArgument, "per-molecule coupling needs n_molecules");
  return std::sqrt(collective_coupling_sq() / double(*n_molecules));
}

void CavityParams::validate() const {
  if (!std::isfinite(epsilon_c) || !std::isfinite(epsilon_a))
    fail(ErrorCode::InvalidArgument, "cavity energies must be finite");
  if (!(gamma > 0) || !std::isfinite(gamma))
    fail(ErrorCode::InvalidArgument, "gamma must be positive and finite");
  if (n_molecules && *n_molecules < 1) fail(ErrorCode::InvalidArgument, "n_molecules must be >= 1");
  if (!finite(coupling) || !finite(v_tilde))
    fail(ErrorCode::InvalidCoupling, "coupling is not finite");
  if (number_density && !(*number_density > 0 && std::isfinite(*number_density)))
    fail(ErrorCode::InvalidArgument, "number_density must be positive");
  if (mu_debye && !(*mu_debye >= 0)) fail(ErrorCode::InvalidArgument, "mu_debye must be >= 0");
  const double g2 = collective_coupling_sq();
  if (n_molecules && coupling && number_density && v_tilde) {
    const double alt = double(*n_molecules) * *coupling * *coupling;
    const double scale = std::max(std::abs(g2), std::abs(alt));
    if (std::abs(g2 - alt) > 1e-9 * scale)
      fail(ErrorCode::InconsistentParams, "N V^2 and density * Vtilde^2 disagree");
  }
}

}  // namespace cdis

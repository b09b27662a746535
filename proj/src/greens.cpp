#include "cdis/greens.hpp"

namespace cdis {

EigenSystem<double> diagonalize(const HamiltonianSpec& spec) { return diagonalize(spec.h0()); }

std::vector<GreensEvaluation<double>> averaged_greens(const EigenSystem<double>& eig,
                                                      const HamiltonianSpec& spec,
                                                      const SpectralGrid<double>& grid,
                                                      const ElementSet& elements) {
  if (!spec.uniform_mask())
    fail(ErrorCode::InvalidArgument,
         "eigen route needs every site disordered; use solve_greens");
  return averaged_greens(eig, spec.gamma(), grid, elements);
}

std::vector<GreensEvaluation<double>> solve_greens(const HamiltonianSpec& spec,
                                                   const SpectralGrid<double>& grid,
                                                   const ElementSet& elements) {
  return solve_greens<double>(spec.h0(), spec.gamma() * spec.mask_vector(), grid, elements);
}

std::vector<GreensEvaluation<double>> evaluate_greens(const HamiltonianSpec& spec,
                                                      const SpectralGrid<double>& grid,
                                                      const ElementSet& elements) {
  if (spec.uniform_mask()) return averaged_greens(diagonalize(spec), spec, grid, elements);
  return solve_greens(spec, grid, elements);
}

double default_eta(const HamiltonianSpec& spec) noexcept {
  return spec.uniform_mask() ? 0.0 : 1e-3 * spec.gamma();
}

}  // namespace cdis

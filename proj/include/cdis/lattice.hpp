#pragma once

// Deterministic Hamiltonians for tight-binding graphs and the single-mode
// cavity. Site 0 is the hub of a star and the cavity photon of the
// Tavis-Cummings layout; CSV column order relies on that.

#include "cdis/cavity_params.hpp"
#include "cdis/types.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace cdis {

enum class TopologyKind { Chain, Ring, Star, Complete, Custom };

std::string_view to_string(TopologyKind kind) noexcept;
std::optional<TopologyKind> parse_topology_kind(std::string_view name) noexcept;

struct Edge {
  Index i = 0;
  Index j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Validated simple graph. Construct through build_topology().
class Topology {
 public:
  TopologyKind kind() const noexcept { return kind_; }
  Index n_sites() const noexcept { return n_sites_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// 0/1 adjacency matrix.
  MatrixXd adjacency() const;

 private:
  friend Topology build_topology(TopologyKind, Index, std::vector<Edge>);
  Topology(TopologyKind kind, Index n, std::vector<Edge> edges)
      : kind_(kind), n_sites_(n), edges_(std::move(edges)) {}

  TopologyKind kind_;
  Index n_sites_;
  std::vector<Edge> edges_;
};

/// Named families ignore `edges`; Custom requires a non-empty list.
/// Throws InvalidSize or InvalidEdge.
Topology build_topology(TopologyKind kind, Index n_sites,
                        std::vector<Edge> edges = {});

enum class Distribution { Cauchy, Gaussian, Uniform };

std::string_view to_string(Distribution d) noexcept;
std::optional<Distribution> parse_distribution(std::string_view name) noexcept;

/// Diagonal disorder law. `scale` is the half-width for Cauchy, the standard
/// deviation for Gaussian and the half-range w of U(-w, w) for Uniform.
struct DisorderSpec {
  Distribution distribution = Distribution::Cauchy;
  double scale = 0.1;

  void validate() const;
};

/// Real symmetric H0 plus the Cauchy width and the set of sites it acts on.
class HamiltonianSpec {
 public:
  HamiltonianSpec(MatrixXd h0, double gamma, std::vector<bool> disordered,
                  double hopping = 0.0);

  const MatrixXd& h0() const noexcept { return h0_; }
  double gamma() const noexcept { return gamma_; }
  double hopping() const noexcept { return hopping_; }
  VectorXd onsite() const { return h0_.diagonal(); }
  Index n_sites() const noexcept { return h0_.rows(); }

  const std::vector<bool>& disordered() const noexcept { return disordered_; }
  bool uniform_mask() const noexcept;
  /// Mask as a 0/1 vector, handy for diag(mask) products.
  VectorXd mask_vector() const;

  /// Copy with a different Cauchy width (same H0 and mask).
  HamiltonianSpec with_gamma(double gamma) const;

 private:
  MatrixXd h0_;
  double gamma_;
  std::vector<bool> disordered_;
  double hopping_;
};

/// Hückel matrix: alpha on the diagonal, beta on every edge, every site
/// disordered.
HamiltonianSpec assemble_huckel(const Topology& topology, double alpha,
                                double beta, double gamma);

/// Tavis-Cummings layout of size N+1: cavity at index 0 (not disordered),
/// molecules 1..N with energy epsilon_a, uniform coupling V to the cavity.
HamiltonianSpec assemble_cavity(const CavityParams& params);

}  // namespace cdis

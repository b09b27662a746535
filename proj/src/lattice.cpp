#include "cdis/lattice.hpp"

#include "cdis/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace cdis {

std::string_view to_string(TopologyKind kind) noexcept {
  switch (kind) {
    case TopologyKind::Chain: return "chain";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Star: return "star";
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Custom: return "custom";
  }
  return "?";
}

std::optional<TopologyKind> parse_topology_kind(std::string_view name) noexcept {
  for (auto k : {TopologyKind::Chain, TopologyKind::Ring, TopologyKind::Star,
                 TopologyKind::Complete, TopologyKind::Custom})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

MatrixXd Topology::adjacency() const {
  MatrixXd a = MatrixXd::Zero(n_sites_, n_sites_);
  for (const auto& e : edges_) a(e.i, e.j) = a(e.j, e.i) = 1.0;
  return a;
}

Topology build_topology(TopologyKind kind, Index n, std::vector<Edge> edges) {
  if (n < 1) fail(ErrorCode::InvalidSize, "n_sites must be >= 1");
  std::vector<Edge> out;
  switch (kind) {
    case TopologyKind::Chain:
      for (Index i = 0; i + 1 < n; ++i) out.push_back({i, i + 1});
      break;
    case TopologyKind::Ring:
      if (n < 3) fail(ErrorCode::InvalidSize, "ring needs n_sites >= 3");
      for (Index i = 0; i < n; ++i) out.push_back({i, (i + 1) % n});
      break;
    case TopologyKind::Star:
      for (Index i = 1; i < n; ++i) out.push_back({0, i});
      break;
    case TopologyKind::Complete:
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) out.push_back({i, j});
      break;
    case TopologyKind::Custom: {
      if (edges.empty()) fail(ErrorCode::InvalidEdge, "custom topology needs edges");
      std::set<std::pair<Index, Index>> seen;
      for (const auto& e : edges) {
        const std::string label = "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
          fail(ErrorCode::InvalidEdge, "edge " + label + " out of range");
        if (e.i == e.j) fail(ErrorCode::InvalidEdge, "self-loop " + label);
        if (!seen.insert({std::min(e.i, e.j), std::max(e.i, e.j)}).second)
          fail(ErrorCode::InvalidEdge, "duplicate edge " + label);
      }
      out = std::move(edges);
      break;
    }
  }
  return Topology(kind, n, std::move(out));
}

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::Cauchy: return "cauchy";
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Uniform: return "uniform";
  }
  return "?";
}

std::optional<Distribution> parse_distribution(std::string_view name) noexcept {
  for (auto d : {Distribution::Cauchy, Distribution::Gaussian, Distribution::Uniform})
    if (to_string(d) == name) return d;
  return std::nullopt;
}

void DisorderSpec::validate() const {
  if (!(scale > 0) || !std::isfinite(scale))
    fail(ErrorCode::InvalidArgument, "disorder scale must be positive and finite");
}

HamiltonianSpec::HamiltonianSpec(MatrixXd h0, double gamma, std::vector<bool> disordered,
                                 double hopping)
    : h0_(std::move(h0)), gamma_(gamma), disordered_(std::move(disordered)), hopping_(hopping) {
  if (h0_.rows() != h0_.cols() || h0_.rows() == 0)
    fail(ErrorCode::InvalidArgument, "h0 must be square and non-empty");
  if (h0_ != h0_.transpose()) fail(ErrorCode::InvalidArgument, "h0 must be symmetric");
  if (!h0_.allFinite()) fail(ErrorCode::InvalidArgument, "h0 has non-finite entries");
  if (!(gamma_ > 0) || !std::isfinite(gamma_))
    fail(ErrorCode::InvalidArgument, "gamma must be positive and finite");
  if (static_cast<Index>(disordered_.size()) != h0_.rows())
    fail(ErrorCode::LengthMismatch, "disorder mask size differs from h0");
}

bool HamiltonianSpec::uniform_mask() const noexcept {
  return std::all_of(disordered_.begin(), disordered_.end(), [](bool b) { return b; });
}

VectorXd HamiltonianSpec::mask_vector() const {
  VectorXd m(n_sites());
  for (Index i = 0; i < m.size(); ++i) m(i) = disordered_[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  return m;
}

HamiltonianSpec HamiltonianSpec::with_gamma(double gamma) const {
  return HamiltonianSpec(h0_, gamma, disordered_, hopping_);
}

HamiltonianSpec assemble_huckel(const Topology& topology, double alpha, double beta,
                                double gamma) {
  const Index n = topology.n_sites();
  MatrixXd h0 = beta * topology.adjacency();
  h0.diagonal().setConstant(alpha);
  return HamiltonianSpec(std::move(h0), gamma, std::vector<bool>(static_cast<std::size_t>(n), true),
                         beta);
}

HamiltonianSpec assemble_cavity(const CavityParams& params) {
  params.validate();
  if (!params.n_molecules)
    fail(ErrorCode::InvalidArgument, "matrix assembly needs n_molecules");
  const Index n = *params.n_molecules;
  const double v = params.molecule_coupling();
  if (!std::isfinite(v)) fail(ErrorCode::InvalidCoupling, "coupling is not finite");

  MatrixXd h0 = MatrixXd::Zero(n + 1, n + 1);
  h0(0, 0) = params.epsilon_c;
  for (Index i = 1; i <= n; ++i) {
    h0(i, i) = params.epsilon_a;
    h0(0, i) = h0(i, 0) = v;
  }
  std::vector<bool> mask(static_cast<std::size_t>(n + 1), true);
  mask[0] = false;
  return HamiltonianSpec(std::move(h0), params.gamma, std::move(mask), v);
}

}  // namespace cdis

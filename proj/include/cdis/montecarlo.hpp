#pragma once

// Brute-force disorder averaging, used as the independent check on the
// deterministic complex-Hamiltonian results. Each realization
// H = H0 + diag(xi * mask) is solved exactly at frequency w + i*eta; means and
// standard errors are accumulated in one pass.

#include "cdis/greens.hpp"
#include "cdis/lattice.hpp"
#include "cdis/quadrature.hpp"
#include "cdis/types.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace cdis {

/// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for sample `index` of a run seeded with `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

 private:
  std::uint64_t state_;
};

/// n i.i.d. draws. Cauchy uses gamma * tan(pi (u - 1/2)) with u in (0, 1).
VectorXd sample_disorder(const DisorderSpec& dist, Index n_sites, SplitMix64& rng);

struct EnsembleConfig {
  long n_samples = 1000;
  std::uint64_t seed = 1;
  DisorderSpec distribution;
  double eta = 0.02;
  /// 0 = hardware concurrency. Results do not depend on this.
  unsigned threads = 0;

  void validate() const;
};

struct EnsembleResult {
  std::vector<double> omegas;
  std::vector<Element> elements;
  MatrixXcd mean;       // omegas x elements
  MatrixXd stderr_re;   // standard error of the mean, real part
  MatrixXd stderr_im;
  MatrixXd variance_re; // sample variance (n - 1 denominator)
  MatrixXd variance_im;
  long n_samples = 0;
};

/// Samples are processed in fixed chunks of this size; chunk statistics are
/// merged in chunk order.
inline constexpr long kSamplesPerChunk = 1024;

/// Generic route: every realization is diagonalized once and evaluated at
/// all frequencies. Requires eta > 0.
EnsembleResult ensemble_average(const HamiltonianSpec& spec, const EnsembleConfig& config,
                                const std::vector<double>& omegas,
                                const ElementSet& elements);

/// Same, with the realizations' disorder supplied by the caller (used for
/// forced-zero and fixed-draw checks). `draws` has one column per sample.
EnsembleResult ensemble_average_fixed(const HamiltonianSpec& spec, const MatrixXd& draws,
                                      double eta, const std::vector<double>& omegas,
                                      const ElementSet& elements);

/// Cavity element G_cc only, for N molecules with per-molecule coupling V,
/// through the Schur complement of the arrowhead matrix:
///   G_cc = 1 / (z - e_c - V^2 sum_i 1 / (z - e_a - xi_i)),  z = w + i*eta.
/// O(N) per frequency, so N in the thousands is cheap.
EnsembleResult ensemble_cavity_greens(const CavityParams& params, const EnsembleConfig& config,
                                      const std::vector<double>& omegas);

/// Full width at half maximum of the highest point of `ys` within
/// [lo, hi], half-height crossings located by linear interpolation.
/// Throws PeakNotFound or UnresolvedWidth.
template <typename Xs, typename Ys>
value_of<Ys> estimate_peak_width(const Xs& xs, const Ys& ys, value_of<Xs> lo,
                                 value_of<Xs> hi) {
  using Real = value_of<Ys>;
  const auto n = static_cast<std::size_t>(std::size(xs));
  if (n != static_cast<std::size_t>(std::size(ys)))
    fail(ErrorCode::LengthMismatch, "xs and ys differ in length");
  require_increasing(xs);
  std::size_t first = n, last = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (xs[k] >= lo && xs[k] <= hi) {
      first = std::min(first, k);
      last = k;
    }
  if (first >= n) fail(ErrorCode::PeakNotFound, "window contains no samples");
  std::size_t top = first;
  for (std::size_t k = first; k <= last; ++k)
    if (ys[k] > ys[top]) top = k;
  if (top == first || top == last)
    fail(ErrorCode::PeakNotFound, "maximum sits on the window edge");
  const Real half = ys[top] / Real(2);

  std::size_t l = top;
  while (l > first && ys[l] > half) --l;
  std::size_t r = top;
  while (r < last && ys[r] > half) ++r;
  if (ys[l] > half || ys[r] > half)
    fail(ErrorCode::UnresolvedWidth, "half-height crossing outside the window");
  const Real xl = xs[l] + (half - ys[l]) * (xs[l + 1] - xs[l]) / (ys[l + 1] - ys[l]);
  const Real xr = xs[r - 1] + (half - ys[r - 1]) * (xs[r] - xs[r - 1]) / (ys[r] - ys[r - 1]);
  return xr - xl;
}

}  // namespace cdis

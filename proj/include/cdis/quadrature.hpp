#pragma once

// Trapezoid sums, integration windows and peak picking on sampled curves.
// Everything accepts any indexable container (std::vector, Eigen vectors).

#include "cdis/error.hpp"
#include "cdis/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace cdis {

template <typename C>
using value_of = std::decay_t<decltype(std::declval<const C&>()[0])>;

template <typename Real = double>
struct Window {
  Real lo = Real(0);
  Real hi = Real(1);
  Index n_points = 2;

  void validate() const {
    if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "window needs lo < hi");
    if (n_points < 2) fail(ErrorCode::InvalidArgument, "window needs >= 2 points");
  }

  std::vector<Real> points() const {
    validate();
    std::vector<Real> xs(static_cast<std::size_t>(n_points));
    const Real step = (hi - lo) / Real(n_points - 1);
    for (Index k = 0; k < n_points; ++k) xs[static_cast<std::size_t>(k)] = lo + step * Real(k);
    xs.back() = hi;
    return xs;
  }

  Real step() const { return (hi - lo) / Real(n_points - 1); }
};

template <typename Xs>
void require_increasing(const Xs& xs) {
  for (std::size_t k = 1; k < static_cast<std::size_t>(std::size(xs)); ++k)
    if (!(xs[k] > xs[k - 1]))
      fail(ErrorCode::NonMonotonicGrid, "abscissae must be strictly increasing");
}

/// Composite trapezoid rule.
template <typename Xs, typename Ys>
value_of<Ys> integrate_trapezoid(const Xs& xs, const Ys& ys) {
  using Real = value_of<Ys>;
  const auto n = static_cast<std::size_t>(std::size(xs));
  if (n != static_cast<std::size_t>(std::size(ys)))
    fail(ErrorCode::LengthMismatch, "xs and ys differ in length");
  if (n < 2) fail(ErrorCode::LengthMismatch, "need at least two samples");
  require_increasing(xs);
  Real sum = Real(0);
  for (std::size_t k = 1; k < n; ++k)
    sum += Real(0.5) * Real(xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]);
  return sum;
}

/// Trapezoid over the part of the grid inside [lo, hi], with the end
/// intervals clipped by linear interpolation.
template <typename Xs, typename Ys>
value_of<Ys> integrate_between(const Xs& xs, const Ys& ys, value_of<Xs> lo,
                               value_of<Xs> hi) {
  using Real = value_of<Ys>;
  const auto n = static_cast<std::size_t>(std::size(xs));
  if (n != static_cast<std::size_t>(std::size(ys)))
    fail(ErrorCode::LengthMismatch, "xs and ys differ in length");
  require_increasing(xs);
  if (!(lo < hi) || lo < xs[0] || hi > xs[n - 1])
    fail(ErrorCode::InvalidArgument, "integration bounds outside the grid");
  auto interp = [&](std::size_t k, value_of<Xs> x) {
    const Real t = Real((x - xs[k]) / (xs[k + 1] - xs[k]));
    return ys[k] + t * (ys[k + 1] - ys[k]);
  };
  Real sum = Real(0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto a = std::max(xs[k], lo);
    const auto b = std::min(xs[k + 1], hi);
    if (!(b > a)) continue;
    sum += Real(0.5) * Real(b - a) * (interp(k, a) + interp(k, b));
  }
  return sum;
}

/// [min - pad*gamma, max + pad*gamma] with at least `min_points` samples and
/// a step no coarser than gamma/20.
template <typename Spectrum, typename Real = value_of<Spectrum>>
Window<Real> auto_window(const Spectrum& spectrum, Real gamma, Real pad_factor = Real(40),
                         Index min_points = 4001) {
  const auto n = static_cast<std::size_t>(std::size(spectrum));
  if (n == 0) fail(ErrorCode::InvalidArgument, "empty spectrum");
  if (!(gamma > Real(0))) fail(ErrorCode::InvalidArgument, "gamma must be > 0");
  Real lo = spectrum[0], hi = spectrum[0];
  for (std::size_t k = 1; k < n; ++k) {
    lo = std::min<Real>(lo, spectrum[k]);
    hi = std::max<Real>(hi, spectrum[k]);
  }
  Window<Real> w{lo - pad_factor * gamma, hi + pad_factor * gamma, min_points};
  const auto by_step = static_cast<Index>(std::ceil((w.hi - w.lo) / (gamma / Real(20)))) + 1;
  w.n_points = std::max(w.n_points, by_step);
  return w;
}

template <typename Real = double>
struct Peak {
  Real position;
  Real height;
  Real prominence;
};

/// 1% of the global maximum.
template <typename Ys>
value_of<Ys> default_prominence(const Ys& ys) {
  value_of<Ys> top = ys[0];
  for (std::size_t k = 1; k < static_cast<std::size_t>(std::size(ys)); ++k)
    top = std::max(top, ys[k]);
  return value_of<Ys>(0.01) * top;
}

/// Local maxima filtered by topographic prominence, refined by a parabola
/// through the three samples around each maximum.
template <typename Xs, typename Ys>
std::vector<Peak<value_of<Ys>>> find_peaks(const Xs& xs, const Ys& ys,
                                           value_of<Ys> min_prominence) {
  using Real = value_of<Ys>;
  const auto n = static_cast<std::size_t>(std::size(xs));
  if (n != static_cast<std::size_t>(std::size(ys)))
    fail(ErrorCode::LengthMismatch, "xs and ys differ in length");
  if (!(min_prominence > Real(0)))
    fail(ErrorCode::InvalidArgument, "min_prominence must be > 0");
  require_increasing(xs);

  std::vector<Peak<Real>> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(ys[i] > ys[i - 1] && ys[i] >= ys[i + 1])) continue;
    Real left_min = ys[i];
    for (std::size_t k = i; k-- > 0;) {
      if (ys[k] > ys[i]) break;
      left_min = std::min(left_min, ys[k]);
    }
    Real right_min = ys[i];
    for (std::size_t k = i + 1; k < n; ++k) {
      if (ys[k] > ys[i]) break;
      right_min = std::min(right_min, ys[k]);
    }
    const Real prominence = ys[i] - std::max(left_min, right_min);
    if (prominence < min_prominence) continue;

    const Real x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
    const Real y0 = ys[i - 1], y1 = ys[i], y2 = ys[i + 1];
    const Real d01 = (y1 - y0) / (x1 - x0);
    const Real d12 = (y2 - y1) / (x2 - x1);
    const Real curv = (d12 - d01) / (x2 - x0);  // half the second derivative
    Real pos = x1, height = y1;
    if (curv < Real(0)) {
      const Real slope_mid = d01 + curv * (x1 - x0);  // derivative at x1
      pos = x1 - slope_mid / (Real(2) * curv);
      pos = std::clamp(pos, x0, x2);
      height = y1 + slope_mid * (pos - x1) + curv * (pos - x1) * (pos - x1);
    }
    peaks.push_back({pos, height, prominence});
  }
  return peaks;
}

/// Linear interpolation of (xs, ys) onto `at`; outside the range the end
/// values are held.
template <typename Xs, typename Ys, typename At>
std::vector<value_of<Ys>> resample(const Xs& xs, const Ys& ys, const At& at) {
  using Real = value_of<Ys>;
  const auto n = static_cast<std::size_t>(std::size(xs));
  if (n != static_cast<std::size_t>(std::size(ys)) || n == 0)
    fail(ErrorCode::LengthMismatch, "xs and ys differ in length");
  require_increasing(xs);
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(std::size(at)));
  for (std::size_t q = 0; q < static_cast<std::size_t>(std::size(at)); ++q) {
    const auto x = at[q];
    if (x <= xs[0]) { out.push_back(ys[0]); continue; }
    if (x >= xs[n - 1]) { out.push_back(ys[n - 1]); continue; }
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (xs[mid] <= x ? lo : hi) = mid;
    }
    const Real t = Real((x - xs[lo]) / (xs[hi] - xs[lo]));
    out.push_back(ys[lo] + t * (ys[hi] - ys[lo]));
  }
  return out;
}

}  // namespace cdis

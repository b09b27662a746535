#include "cdis/montecarlo.hpp"

#include "cdis/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

namespace cdis {

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) noexcept {
  // Hash (seed, index) through two rounds so neighbouring indices start far
  // apart in the sequence.
  SplitMix64 mix(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t base = mix();
  SplitMix64 keyed(base + index * 0xd1342543de82ef95ULL);
  return SplitMix64(keyed());
}

double SplitMix64::uniform_open() noexcept {
  for (;;) {
    const double u = double((*this)() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

VectorXd sample_disorder(const DisorderSpec& dist, Index n_sites, SplitMix64& rng) {
  dist.validate();
  VectorXd xi(n_sites);
  switch (dist.distribution) {
    case Distribution::Cauchy:
      for (Index i = 0; i < n_sites; ++i) {
        const double u = rng.uniform_open();
        xi(i) = dist.scale * std::tan(pi_v<double> * (u - 0.5));
      }
      break;
    case Distribution::Gaussian: {
      std::normal_distribution<double> normal(0.0, dist.scale);
      for (Index i = 0; i < n_sites; ++i) xi(i) = normal(rng);
      break;
    }
    case Distribution::Uniform:
      for (Index i = 0; i < n_sites; ++i) xi(i) = dist.scale * (2.0 * rng.uniform_open() - 1.0);
      break;
  }
  return xi;
}

void EnsembleConfig::validate() const {
  if (n_samples < 1) fail(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (!(eta > 0) || !std::isfinite(eta))
    fail(ErrorCode::InvalidArgument, "realizations need eta > 0");
  distribution.validate();
}

namespace {

using ArrayXXd = Eigen::ArrayXXd;

// Welford accumulator over a block of cells (elements x omegas).
struct RunningStats {
  long count = 0;
  ArrayXXd mean_re, mean_im, m2_re, m2_im;

  RunningStats(Index rows, Index cols)
      : mean_re(ArrayXXd::Zero(rows, cols)),
        mean_im(ArrayXXd::Zero(rows, cols)),
        m2_re(ArrayXXd::Zero(rows, cols)),
        m2_im(ArrayXXd::Zero(rows, cols)) {}

  void push(const ArrayXXd& re, const ArrayXXd& im) {
    ++count;
    const double inv = 1.0 / double(count);
    ArrayXXd d = re - mean_re;
    mean_re += d * inv;
    m2_re += d * (re - mean_re);
    d = im - mean_im;
    mean_im += d * inv;
    m2_im += d * (im - mean_im);
  }

  // Chan et al. pairwise combination.
  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = double(count), nb = double(o.count), n = na + nb;
    ArrayXXd d = o.mean_re - mean_re;
    mean_re += d * (nb / n);
    m2_re += o.m2_re + d.square() * (na * nb / n);
    d = o.mean_im - mean_im;
    mean_im += d * (nb / n);
    m2_im += o.m2_im + d.square() * (na * nb / n);
    count += o.count;
  }
};

// Evaluates one realization into (re, im) blocks of shape elements x omegas.
using SampleFn = std::function<void(long sample, ArrayXXd& re, ArrayXXd& im)>;

EnsembleResult run_ensemble(long n_samples, unsigned threads, Index n_elements,
                            const std::vector<double>& omegas, const SampleFn& sample) {
  const Index n_omega = static_cast<Index>(omegas.size());
  const long n_chunks = (n_samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  std::vector<RunningStats> chunks(static_cast<std::size_t>(n_chunks),
                                   RunningStats(n_elements, n_omega));

  std::atomic<long> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    ArrayXXd re(n_elements, n_omega), im(n_elements, n_omega);
    try {
      for (long c = next++; c < n_chunks; c = next++) {
        auto& stats = chunks[static_cast<std::size_t>(c)];
        const long end = std::min(n_samples, (c + 1) * kSamplesPerChunk);
        for (long s = c * kSamplesPerChunk; s < end; ++s) {
          sample(s, re, im);
          stats.push(re, im);
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n_chunks;
    }
  };
  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = static_cast<unsigned>(std::min<long>(n_threads, n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  RunningStats total(n_elements, n_omega);
  for (const auto& c : chunks) total.merge(c);

  EnsembleResult out;
  out.omegas = omegas;
  out.n_samples = total.count;
  out.mean.resize(n_omega, n_elements);
  out.mean.real() = total.mean_re.matrix().transpose();
  out.mean.imag() = total.mean_im.matrix().transpose();
  const double dof = total.count > 1 ? double(total.count - 1) : 1.0;
  out.variance_re = (total.m2_re / dof).matrix().transpose();
  out.variance_im = (total.m2_im / dof).matrix().transpose();
  if (total.count > 1) {
    out.stderr_re = (out.variance_re.array() / double(total.count)).sqrt().matrix();
    out.stderr_im = (out.variance_im.array() / double(total.count)).sqrt().matrix();
  } else {
    out.stderr_re = MatrixXd::Zero(n_omega, n_elements);
    out.stderr_im = MatrixXd::Zero(n_omega, n_elements);
  }
  return out;
}

// Resolvent entries of one real symmetric realization at w + i*eta.
struct RealizationSolver {
  const MatrixXd& h0;
  VectorXd mask;
  std::vector<Element> elements;
  Eigen::RowVectorXd omegas;
  double eta;

  void operator()(const VectorXd& xi, ArrayXXd& re, ArrayXXd& im) const {
    MatrixXd h = h0;
    h.diagonal() += xi.cwiseProduct(mask);
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::ConvergenceFailure, "realization eigensolver did not converge");
    const VectorXd& lambda = solver.eigenvalues();
    const MatrixXd& u = solver.eigenvectors();
    const Index n = h.rows();

    MatrixXd weights(static_cast<Index>(elements.size()), n);
    for (std::size_t k = 0; k < elements.size(); ++k)
      weights.row(static_cast<Index>(k)) =
          u.row(elements[k].row).cwiseProduct(u.row(elements[k].col));

    // 1 / (w + i*eta - lambda) = (a - i*eta) / (a^2 + eta^2), a = w - lambda
    const Eigen::ArrayXXd a = (omegas.replicate(n, 1).colwise() - lambda).array();
    const Eigen::ArrayXXd inv = (a.square() + eta * eta).inverse();
    re.matrix().noalias() = weights * (a * inv).matrix();
    im.matrix().noalias() = weights * (-eta * inv).matrix();
  }
};

std::vector<Element> checked_elements(const ElementSet& set, Index n) {
  if (set.mode() == ElementSet::Mode::Full) return ElementSet::upper_triangle(n).resolve(n);
  return set.resolve(n);
}

}  // namespace

EnsembleResult ensemble_average(const HamiltonianSpec& spec, const EnsembleConfig& config,
                                const std::vector<double>& omegas,
                                const ElementSet& elements) {
  config.validate();
  SpectralGrid<double>{omegas, config.eta}.validate();
  const Index n = spec.n_sites();
  RealizationSolver solver{spec.h0(), spec.mask_vector(), checked_elements(elements, n),
                           Eigen::Map<const Eigen::RowVectorXd>(omegas.data(),
                                                                Index(omegas.size())),
                           config.eta};
  auto result = run_ensemble(
      config.n_samples, config.threads, Index(solver.elements.size()), omegas,
      [&](long s, ArrayXXd& re, ArrayXXd& im) {
        auto rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(s));
        solver(sample_disorder(config.distribution, n, rng), re, im);
      });
  result.elements = solver.elements;
  return result;
}

EnsembleResult ensemble_average_fixed(const HamiltonianSpec& spec, const MatrixXd& draws,
                                      double eta, const std::vector<double>& omegas,
                                      const ElementSet& elements) {
  if (!(eta > 0)) fail(ErrorCode::InvalidArgument, "realizations need eta > 0");
  if (draws.rows() != spec.n_sites() || draws.cols() < 1)
    fail(ErrorCode::LengthMismatch, "draws must have one row per site and >= 1 column");
  SpectralGrid<double>{omegas, eta}.validate();
  const Index n = spec.n_sites();
  RealizationSolver solver{spec.h0(), spec.mask_vector(), checked_elements(elements, n),
                           Eigen::Map<const Eigen::RowVectorXd>(omegas.data(),
                                                                Index(omegas.size())),
                           eta};
  auto result = run_ensemble(draws.cols(), 1, Index(solver.elements.size()), omegas,
                             [&](long s, ArrayXXd& re, ArrayXXd& im) {
                               solver(draws.col(s), re, im);
                             });
  result.elements = solver.elements;
  return result;
}

EnsembleResult ensemble_cavity_greens(const CavityParams& params, const EnsembleConfig& config,
                                      const std::vector<double>& omegas) {
  config.validate();
  params.validate();
  SpectralGrid<double>{omegas, config.eta}.validate();
  if (!params.n_molecules) fail(ErrorCode::InvalidArgument, "cavity ensemble needs n_molecules");
  const Index n = *params.n_molecules;
  const double v2 = std::pow(params.molecule_coupling(), 2);
  const double eta = config.eta, eta2 = eta * eta;

  auto result = run_ensemble(
      config.n_samples, config.threads, 1, omegas, [&](long s, ArrayXXd& re, ArrayXXd& im) {
        auto rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(s));
        const VectorXd levels =
            sample_disorder(config.distribution, n, rng).array() + params.epsilon_a;
        for (std::size_t k = 0; k < omegas.size(); ++k) {
          const double w = omegas[k];
          double sum_re = 0.0, sum_im = 0.0;
          for (Index i = 0; i < n; ++i) {
            const double a = w - levels(i);
            const double inv = 1.0 / (a * a + eta2);
            sum_re += a * inv;
            sum_im -= eta * inv;
          }
          const std::complex<double> g =
              1.0 / (std::complex<double>(w - params.epsilon_c - v2 * sum_re, eta - v2 * sum_im));
          re(0, Index(k)) = g.real();
          im(0, Index(k)) = g.imag();
        }
      });
  result.elements = {{0, 0}};
  return result;
}

}  // namespace cdis

#pragma once

// Batch runs behind the command-line tool: configuration, dispatch and the
// CSV/JSON artifacts each command writes.

#include "cdis/cavity_params.hpp"
#include "cdis/greens.hpp"
#include "cdis/lattice.hpp"
#include "cdis/montecarlo.hpp"
#include "cdis/quadrature.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cdis::app {

/// Every default the tool applies, in one place.
namespace defaults {
inline constexpr double pad_factor = 40.0;       // window padding, units of gamma
inline constexpr Index min_points = 4001;        // auto-window sample count floor
inline constexpr double mixed_mask_eta = 1e-3;   // eta / gamma when some sites are clean
inline constexpr double ensemble_eta = 0.02;     // eV, realizations
inline constexpr long samples = 10000;
inline constexpr std::uint64_t seed = 1;
inline constexpr Index mc_points = 201;
inline constexpr double mc_pad_factor = 5.0;     // mc-compare window padding, units of gamma
inline constexpr double prominence = 0.01;       // fraction of the global maximum
inline constexpr double dip_half_width = 0.1;    // eV, molecular dip window around e_a
inline constexpr double cavity_coupling_pad = 6.0;  // window padding, units of sqrt(N V^2)
}  // namespace defaults

enum class Command { Dos, Cavity, McCompare, SumRules };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

struct LatticeModel {
  TopologyKind kind = TopologyKind::Chain;
  Index n_sites = 1;
  std::vector<Edge> edges;
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.1;
};

using Model = std::variant<LatticeModel, CavityParams>;

struct GridConfig {
  std::optional<Window<double>> window;  // explicit lo:hi:n
  std::optional<double> eta;
  double pad_factor = defaults::pad_factor;
  Index min_points = defaults::min_points;
};

struct EnsembleSection {
  long samples = defaults::samples;
  std::uint64_t seed = defaults::seed;
  std::optional<Distribution> distribution;  // default Cauchy
  std::optional<double> scale;               // default: the model's gamma
  double eta = defaults::ensemble_eta;
  unsigned threads = 0;
};

struct RunConfig {
  Command command = Command::Dos;
  std::optional<Model> model;
  GridConfig grid;
  EnsembleSection ensemble;
  std::vector<std::string> columns;
  std::optional<double> prominence;
  double dip_half_width = defaults::dip_half_width;
  std::filesystem::path output = {};
  bool quiet = false;
};

/// INI-style text:
///
///   [model]    kind, n_sites, edges ("0-1 1-2 ..."), alpha, beta, gamma
///   [cavity]   epsilon_c, epsilon_a, gamma, n_molecules, coupling,
///              number_density, v_tilde, mu_debye
///   [grid]     range (lo:hi:n) or lo/hi/n, eta, pad_factor, min_points
///   [ensemble] samples, seed, distribution, scale, eta, threads
///   [output]   path, columns
///   [analysis] prominence, dip_half_width
///
/// Exactly one of [model] / [cavity]. Unknown sections or keys are errors.
/// Throws Error(ConfigParse) naming the line or key.
RunConfig parse_config(std::string_view text, Command command);
RunConfig load_config(const std::filesystem::path& path, Command command);

/// "lo:hi:n".
Window<double> parse_grid(std::string_view text);

/// Result of one run: files written and the JSON summary.
struct RunReport {
  std::vector<std::filesystem::path> files;
  nlohmann::ordered_json summary;
  bool passed = true;  // false when a sum rule misses its tolerance
};

RunReport run(const RunConfig& config);

/// Exit statuses of the command-line tool.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int usage = 2;
inline constexpr int config_parse = 3;
inline constexpr int io = 4;
inline constexpr int invalid_model = 5;
inline constexpr int numerical = 6;
inline constexpr int sum_rule_failed = 7;
}  // namespace exit_code

int exit_code_for(ErrorCode code) noexcept;

/// Fixed-precision float text used in every artifact (15 significant digits).
std::string format_number(double x);

}  // namespace cdis::app

#include "cdis/app.hpp"

#include "cdis/cavity.hpp"
#include "cdis/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace cdis::app {

using json = nlohmann::ordered_json;

std::string format_number(double x) { return fmt::format("{:.15g}", x); }

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigParse: return exit_code::config_parse;
    case ErrorCode::Io: return exit_code::io;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidEdge:
    case ErrorCode::InvalidSize:
    case ErrorCode::InvalidCoupling:
    case ErrorCode::InconsistentParams:
    case ErrorCode::MissingDipole:
    case ErrorCode::MissingElement:
      return exit_code::invalid_model;
    default:
      return exit_code::numerical;
  }
}

namespace {

// Column-major table written as CSV with a header row.
class Table {
 public:
  void add(std::string name, std::vector<std::string> cells) {
    names_.push_back(std::move(name));
    cols_.push_back(std::move(cells));
  }
  template <typename V>
  void add_numbers(std::string name, const V& values) {
    std::vector<std::string> cells;
    for (Index k = 0; k < static_cast<Index>(std::size(values)); ++k)
      cells.push_back(format_number(values[static_cast<std::size_t>(k)]));
    add(std::move(name), std::move(cells));
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < names_.size(); ++c) out << (c ? "," : "") << names_[c];
    out << '\n';
    const std::size_t rows = cols_.empty() ? 0 : cols_.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols_.size(); ++c) out << (c ? "," : "") << cols_[c][r];
      out << '\n';
    }
    if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> cols_;
};

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::filesystem::path csv_path(const RunConfig& cfg) {
  if (!cfg.output.empty()) return cfg.output;
  return std::string(to_string(cfg.command)) + ".csv";
}

std::filesystem::path json_path(const RunConfig& cfg) {
  auto p = csv_path(cfg);
  p.replace_extension(".json");
  return p;
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json window_json(const Window<double>& w, double eta) {
  return json{{"lo", w.lo}, {"hi", w.hi}, {"n", w.n_points}, {"eta", eta}};
}

json model_json(const Model& model) {
  if (const auto* m = std::get_if<LatticeModel>(&model)) {
    json j{{"block", "model"}, {"kind", to_string(m->kind)}, {"n_sites", m->n_sites}};
    if (m->kind == TopologyKind::Custom) {
      json edges = json::array();
      for (const auto& e : m->edges) edges.push_back({e.i, e.j});
      j["edges"] = edges;
    }
    j["alpha"] = m->alpha;
    j["beta"] = m->beta;
    j["gamma"] = m->gamma;
    return j;
  }
  const auto& p = std::get<CavityParams>(model);
  json j{{"block", "cavity"},
         {"epsilon_c", p.epsilon_c},
         {"epsilon_a", p.epsilon_a},
         {"gamma", p.gamma}};
  auto opt = [&](const char* key, const auto& v) { j[key] = v ? json(*v) : json(nullptr); };
  opt("n_molecules", p.n_molecules);
  opt("coupling", p.coupling);
  opt("number_density", p.number_density);
  opt("v_tilde", p.v_tilde);
  opt("mu_debye", p.mu_debye);
  j["collective_coupling_sq"] = p.collective_coupling_sq();
  return j;
}

json base_config_json(const RunConfig& cfg) {
  json j{{"command", to_string(cfg.command)}, {"model", model_json(*cfg.model)}};
  j["output"] = csv_path(cfg).generic_string();
  return j;
}

HamiltonianSpec build_spec(const Model& model) {
  if (const auto* m = std::get_if<LatticeModel>(&model))
    return assemble_huckel(build_topology(m->kind, m->n_sites, m->edges), m->alpha, m->beta,
                           m->gamma);
  return assemble_cavity(std::get<CavityParams>(model));
}

// Window over the cavity spectrum: both bare levels padded by six Rabi
// half-splittings and pad_factor widths.
Window<double> cavity_window(const CavityParams& p, double pad_factor, Index min_points) {
  const double g = std::sqrt(p.collective_coupling_sq());
  const double reach = defaults::cavity_coupling_pad * g + pad_factor * p.gamma;
  Window<double> w{std::min(p.epsilon_a, p.epsilon_c) - reach,
                   std::max(p.epsilon_a, p.epsilon_c) + reach, min_points};
  const auto by_step = static_cast<Index>(std::ceil((w.hi - w.lo) / (p.gamma / 20.0))) + 1;
  w.n_points = std::max(w.n_points, by_step);
  return w;
}

struct Column {
  enum class Kind { RhoTotal, RhoSite, ReG, ImG } kind;
  Index i = 0, j = 0;
  std::string name;
};

std::vector<Column> parse_columns(const std::vector<std::string>& names, Index n) {
  std::vector<Column> cols;
  if (names.empty()) {
    cols.push_back({Column::Kind::RhoTotal, 0, 0, "rho_total"});
    for (Index i = 0; i < n; ++i)
      cols.push_back({Column::Kind::RhoSite, i, i, "rho_site_" + std::to_string(i)});
    return cols;
  }
  auto index = [&](const std::string& s, const std::string& whole) {
    Index v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size() || v < 0 || v >= n)
      fail(ErrorCode::ConfigParse, "[output] columns: bad site index in '" + whole + "'");
    return v;
  };
  for (const auto& name : names) {
    if (name == "rho_total") {
      cols.push_back({Column::Kind::RhoTotal, 0, 0, name});
    } else if (name.rfind("rho_site_", 0) == 0) {
      const Index i = index(name.substr(9), name);
      cols.push_back({Column::Kind::RhoSite, i, i, name});
    } else if (name.rfind("re_G_", 0) == 0 || name.rfind("im_G_", 0) == 0) {
      const std::string rest = name.substr(5);
      const auto us = rest.find('_');
      if (us == std::string::npos)
        fail(ErrorCode::ConfigParse, "[output] columns: expected re_G_i_j, got '" + name + "'");
      cols.push_back({name[0] == 'r' ? Column::Kind::ReG : Column::Kind::ImG,
                      index(rest.substr(0, us), name), index(rest.substr(us + 1), name), name});
    } else {
      fail(ErrorCode::ConfigParse, "[output] columns: unknown column '" + name + "'");
    }
  }
  return cols;
}

RunReport run_dos(const RunConfig& cfg) {
  const HamiltonianSpec spec = build_spec(*cfg.model);
  const Index n = spec.n_sites();
  const auto eig = diagonalize(spec);
  const double eta = cfg.grid.eta.value_or(default_eta(spec));
  const Window<double> window =
      cfg.grid.window.value_or(auto_window(eig.eigenvalues, spec.gamma(), cfg.grid.pad_factor,
                                           cfg.grid.min_points));
  const SpectralGrid<double> grid{window.points(), eta};

  const auto columns = parse_columns(cfg.columns, n);
  std::vector<Element> wanted = ElementSet::diagonal().resolve(n);
  for (const auto& c : columns)
    if (c.kind == Column::Kind::ReG || c.kind == Column::Kind::ImG) wanted.push_back({c.i, c.j});
  const auto greens = spec.uniform_mask()
                          ? averaged_greens(eig, spec, grid, ElementSet::of(wanted))
                          : solve_greens(spec, grid, ElementSet::of(wanted));
  const MatrixXd rho = site_dos(greens, n);
  const VectorXd rho_total = total_dos(greens, n);

  Table table;
  table.add_numbers("omega", grid.omegas);
  for (const auto& c : columns) {
    std::vector<double> v(grid.omegas.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Index kk = static_cast<Index>(k);
      switch (c.kind) {
        case Column::Kind::RhoTotal: v[k] = rho_total(kk); break;
        case Column::Kind::RhoSite: v[k] = rho(c.i, kk); break;
        case Column::Kind::ReG: v[k] = greens[k].at(c.i, c.j).real(); break;
        case Column::Kind::ImG: v[k] = greens[k].at(c.i, c.j).imag(); break;
      }
    }
    table.add_numbers(c.name, v);
  }

  RunReport report;
  const auto csv = csv_path(cfg);
  table.write(csv);
  report.files.push_back(csv);

  const double prominence = cfg.prominence.value_or(defaults::prominence) * rho_total.maxCoeff();
  json peaks = json::array();
  for (const auto& p : find_peaks(grid.omegas, rho_total, prominence))
    peaks.push_back({{"position", p.position}, {"height", p.height}});

  json config = base_config_json(cfg);
  config["grid"] = window_json(window, eta);
  config["columns"] = json::array();
  for (const auto& c : columns) config["columns"].push_back(c.name);
  config["prominence"] = cfg.prominence.value_or(defaults::prominence);
  json eigs = json::array();
  for (Index m = 0; m < eig.eigenvalues.size(); ++m) eigs.push_back(eig.eigenvalues(m));
  report.summary = json{{"command", "dos"},
                        {"n_sites", n},
                        {"eigenvalues", eigs},
                        {"integral_rho_total", integrate_trapezoid(grid.omegas, rho_total)},
                        {"peaks", peaks},
                        {"config", config}};
  const auto js = json_path(cfg);
  write_json(js, report.summary);
  report.files.push_back(js);
  return report;
}

const CavityParams& require_cavity(const RunConfig& cfg) {
  const auto* p = std::get_if<CavityParams>(&*cfg.model);
  if (!p) fail(ErrorCode::ConfigParse, std::string(to_string(cfg.command)) + " needs a [cavity] block");
  p->validate();
  return *p;
}

RunReport run_cavity(const RunConfig& cfg) {
  const CavityParams& p = require_cavity(cfg);
  const Window<double> window =
      cfg.grid.window.value_or(cavity_window(p, cfg.grid.pad_factor, cfg.grid.min_points));
  const auto xs = window.points();

  Table table;
  table.add_numbers("omega", xs);
  table.add_numbers("rho_c", rho_c(p, xs));
  table.add_numbers("delta_rho_m", delta_rho_m(p, xs));
  table.add_numbers("delta_rho_t", delta_rho_t(p, xs));
  if (p.mu_debye) {
    const VectorXd alpha = absorption(p, xs);
    table.add_numbers("alpha_per_molecule_m2", alpha);
    if (p.number_density) table.add_numbers("alpha_per_volume_per_m", alpha * *p.number_density);
    if (p.n_molecules) table.add_numbers("alpha_total_m2", alpha * double(*p.n_molecules));
    const double top = alpha.maxCoeff();
    table.add_numbers("alpha_normalized", top > 0 ? VectorXd(alpha / top) : alpha);
  }

  RunReport report;
  const auto csv = csv_path(cfg);
  table.write(csv);
  report.files.push_back(csv);

  const auto poles = polariton_poles(p);
  json config = base_config_json(cfg);
  config["grid"] = window_json(window, 0.0);
  report.summary = json{{"command", "cavity"},
                        {"poles", {{"eps_plus", complex_json(poles.plus)},
                                   {"eps_minus", complex_json(poles.minus)}}},
                        {"rabi_splitting", poles.plus.real() - poles.minus.real()},
                        {"collective_coupling", std::sqrt(p.collective_coupling_sq())},
                        {"config", config}};
  const auto js = json_path(cfg);
  write_json(js, report.summary);
  report.files.push_back(js);
  return report;
}

RunReport run_mc_compare(const RunConfig& cfg) {
  const HamiltonianSpec spec = build_spec(*cfg.model);
  EnsembleConfig ens;
  ens.n_samples = cfg.ensemble.samples;
  ens.seed = cfg.ensemble.seed;
  ens.distribution.distribution = cfg.ensemble.distribution.value_or(Distribution::Cauchy);
  ens.distribution.scale = cfg.ensemble.scale.value_or(spec.gamma());
  ens.eta = cfg.grid.eta.value_or(cfg.ensemble.eta);
  ens.threads = cfg.ensemble.threads;
  ens.validate();

  const auto eig = diagonalize(spec);
  Window<double> window;
  if (cfg.grid.window) {
    window = *cfg.grid.window;
  } else {
    const double pad = defaults::mc_pad_factor * spec.gamma();
    window = {eig.eigenvalues.minCoeff() - pad, eig.eigenvalues.maxCoeff() + pad,
              defaults::mc_points};
  }
  const auto omegas = window.points();
  const auto elements = ElementSet::upper_triangle(spec.n_sites());

  const EnsembleResult mc = ensemble_average(spec, ens, omegas, elements);
  const auto engine = spec.uniform_mask()
                          ? averaged_greens(eig, spec, SpectralGrid<double>{omegas, ens.eta}, elements)
                          : solve_greens(spec, SpectralGrid<double>{omegas, ens.eta}, elements);

  std::vector<std::string> c_omega, c_el, c_rm, c_im, c_rs, c_is, c_re, c_ie, c_zr, c_zi;
  double max_dev = 0.0;
  long within = 0, cells = 0;
  auto deviation = [](double diff, double se) {
    if (se > 0) return std::abs(diff) / se;
    return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    for (std::size_t e = 0; e < mc.elements.size(); ++e) {
      const Index kk = Index(k), ee = Index(e);
      const auto m = mc.mean(kk, ee);
      const auto g = engine[k].values(ee);
      const double zr = deviation(m.real() - g.real(), mc.stderr_re(kk, ee));
      const double zi = deviation(m.imag() - g.imag(), mc.stderr_im(kk, ee));
      for (double z : {zr, zi}) {
        max_dev = std::max(max_dev, z);
        within += z <= 3.0;
        ++cells;
      }
      c_omega.push_back(format_number(omegas[k]));
      c_el.push_back("G_" + std::to_string(mc.elements[e].row) + "_" +
                     std::to_string(mc.elements[e].col));
      c_rm.push_back(format_number(m.real()));
      c_im.push_back(format_number(m.imag()));
      c_rs.push_back(format_number(mc.stderr_re(kk, ee)));
      c_is.push_back(format_number(mc.stderr_im(kk, ee)));
      c_re.push_back(format_number(g.real()));
      c_ie.push_back(format_number(g.imag()));
      c_zr.push_back(format_number(zr));
      c_zi.push_back(format_number(zi));
    }
  }
  Table table;
  table.add("omega", std::move(c_omega));
  table.add("element", std::move(c_el));
  table.add("re_mean", std::move(c_rm));
  table.add("im_mean", std::move(c_im));
  table.add("re_stderr", std::move(c_rs));
  table.add("im_stderr", std::move(c_is));
  table.add("re_engine", std::move(c_re));
  table.add("im_engine", std::move(c_ie));
  table.add("re_dev_stderr", std::move(c_zr));
  table.add("im_dev_stderr", std::move(c_zi));

  RunReport report;
  const auto csv = csv_path(cfg);
  table.write(csv);
  report.files.push_back(csv);

  json config = base_config_json(cfg);
  config["grid"] = window_json(window, ens.eta);
  config["ensemble"] = {{"samples", ens.n_samples},
                        {"seed", ens.seed},
                        {"distribution", to_string(ens.distribution.distribution)},
                        {"scale", ens.distribution.scale},
                        {"eta", ens.eta}};
  const double fraction = double(within) / double(cells);
  report.summary = json{{"command", "mc-compare"},
                        {"n_samples", mc.n_samples},
                        {"seed", ens.seed},
                        {"cells", cells},
                        {"max_deviation_stderr", max_dev},
                        {"fraction_within_3_stderr", fraction},
                        {"config", config}};
  const auto js = json_path(cfg);
  write_json(js, report.summary);
  report.files.push_back(js);
  return report;
}

json rule_json(const std::string& name, double value, double expected, double tol,
               const Window<double>& window, bool& all) {
  const bool pass = std::abs(value - expected) <= tol;
  all = all && pass;
  return json{{"name", name},       {"value", value}, {"expected", expected},
              {"tolerance", tol},   {"pass", pass},   {"window", {window.lo, window.hi}},
              {"n_points", window.n_points}};
}

RunReport run_sum_rules(const RunConfig& cfg) {
  json rules = json::array();
  bool all = true;
  json config = base_config_json(cfg);
  if (std::holds_alternative<LatticeModel>(*cfg.model)) {
    const HamiltonianSpec spec = build_spec(*cfg.model);
    const auto eig = diagonalize(spec);
    const double eta = cfg.grid.eta.value_or(default_eta(spec));
    const Window<double> window = cfg.grid.window.value_or(
        auto_window(eig.eigenvalues, spec.gamma(), cfg.grid.pad_factor, cfg.grid.min_points));
    const SpectralGrid<double> grid{window.points(), eta};
    const auto greens = evaluate_greens(spec, grid, ElementSet::diagonal());
    const double n = double(spec.n_sites());
    rules.push_back(rule_json("integral_rho_total",
                              integrate_trapezoid(grid.omegas, total_dos(greens, spec.n_sites())),
                              n, 0.02 * n, window, all));
    config["grid"] = window_json(window, eta);
  } else {
    const CavityParams& p = require_cavity(cfg);
    const Window<double> wide =
        cfg.grid.window.value_or(cavity_window(p, cfg.grid.pad_factor, cfg.grid.min_points));
    const auto xs = wide.points();
    rules.push_back(rule_json("integral_rho_c", integrate_trapezoid(xs, rho_c(p, xs)), 1.0, 0.02,
                              wide, all));
    const Window<double> dip{p.epsilon_a - cfg.dip_half_width, p.epsilon_a + cfg.dip_half_width,
                             wide.n_points};
    const auto dx = dip.points();
    rules.push_back(rule_json("integral_delta_rho_m_dip", integrate_trapezoid(dx, delta_rho_m(p, dx)),
                              -1.0, 0.05, dip, all));
    rules.push_back(rule_json("integral_delta_rho_t", integrate_trapezoid(xs, delta_rho_t(p, xs)),
                              0.0, 0.05, wide, all));
    config["grid"] = window_json(wide, 0.0);
    config["dip_half_width"] = cfg.dip_half_width;
  }

  RunReport report;
  report.passed = all;
  report.summary = json{{"command", "sum-rules"}, {"all_passed", all}, {"rules", rules},
                        {"config", config}};
  const auto js = json_path(cfg);
  write_json(js, report.summary);
  report.files.push_back(js);
  return report;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  if (!cfg.model) fail(ErrorCode::ConfigParse, "config has neither [model] nor [cavity]");
  switch (cfg.command) {
    case Command::Dos: return run_dos(cfg);
    case Command::Cavity: return run_cavity(cfg);
    case Command::McCompare: return run_mc_compare(cfg);
    case Command::SumRules: return run_sum_rules(cfg);
  }
  fail(ErrorCode::InvalidArgument, "unknown command");
}

}  // namespace cdis::app

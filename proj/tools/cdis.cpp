// Command-line front end: cdis <dos|cavity|mc-compare|sum-rules> --config FILE

#include "cdis/app.hpp"
#include "cdis/error.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr const char* kFooter = R"(Exit status:
  0  success
  1  internal error
  2  bad command line
  3  config file could not be parsed
  4  file could not be read or written
  5  invalid model parameters
  6  numerical failure (singular matrix, eigensolver, peak search)
  7  sum-rules: at least one rule missed its tolerance

Defaults:
  eta (engine)        0 if every site is disordered, else 1e-3 * gamma
  eta (mc-compare)    0.02 eV
  grid (dos, rules)   spectrum +- 40 gamma, >= 4001 points, step <= gamma/20
  grid (cavity)       levels +- (6 sqrt(N V^2) + 40 gamma)
  grid (mc-compare)   spectrum +- 5 gamma, 201 points
  samples / seed      10000 / 1
  prominence          1% of the global maximum
  dip window          epsilon_a +- 0.1 eV
)";

struct Flags {
  std::string config;
  std::string out;
  std::string grid;
  double eta = 0;
  std::uint64_t seed = 0;
  long samples = 0;
  bool quiet = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Config file (INI)")->required();
  sub->add_option("--out", f.out, "Output CSV path; the JSON summary goes next to it");
  sub->add_option("--grid", f.grid, "Frequency grid lo:hi:n (eV)");
  sub->add_option("--eta", f.eta, "Regularization eta (eV)");
  sub->add_option("--seed", f.seed, "Monte-Carlo seed");
  sub->add_option("--samples", f.samples, "Monte-Carlo sample count");
  sub->add_flag("--quiet", f.quiet, "Do not print the summary");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cdis;
  CLI::App cli{"Disorder-averaged Green's functions with Cauchy diagonal disorder"};
  cli.footer(kFooter);
  cli.require_subcommand(1);

  Flags flags;
  std::vector<std::pair<CLI::App*, app::Command>> subs;
  for (auto [name, cmd, help] : {
           std::tuple{"dos", app::Command::Dos, "Total and per-site densities of states"},
           std::tuple{"cavity", app::Command::Cavity,
                      "Cavity DOS, molecular DOS change and absorption"},
           std::tuple{"mc-compare", app::Command::McCompare,
                      "Monte-Carlo ensemble vs the deterministic complex Hamiltonian"},
           std::tuple{"sum-rules", app::Command::SumRules, "Spectral sum rules with tolerances"}}) {
    auto* sub = cli.add_subcommand(name, help);
    add_common(sub, flags);
    subs.emplace_back(sub, cmd);
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::exit_code::usage;
  }

  try {
    app::Command command{};
    CLI::App* chosen = nullptr;
    for (auto& [sub, cmd] : subs)
      if (sub->parsed()) {
        chosen = sub;
        command = cmd;
      }

    app::RunConfig cfg = app::load_config(flags.config, command);
    if (chosen->count("--out")) cfg.output = flags.out;
    if (chosen->count("--grid")) cfg.grid.window = app::parse_grid(flags.grid);
    if (chosen->count("--eta")) cfg.grid.eta = flags.eta;
    if (chosen->count("--seed")) cfg.ensemble.seed = flags.seed;
    if (chosen->count("--samples")) cfg.ensemble.samples = flags.samples;
    if (flags.quiet) cfg.quiet = true;

    const app::RunReport report = app::run(cfg);
    if (!cfg.quiet) {
      std::cout << report.summary.dump(2) << '\n';
      for (const auto& f : report.files) std::cerr << "wrote " << f.string() << '\n';
    }
    return report.passed ? app::exit_code::ok : app::exit_code::sum_rule_failed;
  } catch (const Error& e) {
    std::cerr << "cdis: " << e.what() << '\n';
    return app::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "cdis: internal error: " << e.what() << '\n';
    return app::exit_code::internal;
  }
}

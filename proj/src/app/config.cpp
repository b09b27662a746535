#include "cdis/app.hpp"

#include "cdis/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace cdis::app {

namespace pt = boost::property_tree;

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Dos: return "dos";
    case Command::Cavity: return "cavity";
    case Command::McCompare: return "mc-compare";
    case Command::SumRules: return "sum-rules";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (auto c : {Command::Dos, Command::Cavity, Command::McCompare, Command::SumRules})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigParse, where + ": " + what);
}

template <typename T>
T parse_value(std::string_view text, const std::string& where) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    bad(where, "cannot parse '" + s + "'");
  return value;
}

bool parse_bool(std::string_view text, const std::string& where) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad(where, "expected a boolean, got '" + s + "'");
}

std::vector<Edge> parse_edges(std::string_view text, const std::string& where) {
  std::vector<Edge> edges;
  for (const auto& tok : split_tokens(text)) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) bad(where, "edge '" + tok + "' is not of the form i-j");
    edges.push_back({parse_value<Index>(tok.substr(0, dash), where),
                     parse_value<Index>(tok.substr(dash + 1), where)});
  }
  return edges;
}

// Walks the keys of one section, rejecting anything not consumed.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {
    for (const auto& [key, child] : tree_) {
      if (!child.empty()) bad("[" + name_ + "]", "nested section '" + key + "'");
      if (!keys_.insert(key).second) bad(where(key), "duplicate key");
    }
  }

  std::optional<std::string> take(const std::string& key) {
    if (keys_.erase(key) == 0) return std::nullopt;
    return tree_.get<std::string>(key);
  }

  template <typename T>
  std::optional<T> number(const std::string& key) {
    auto raw = take(key);
    if (!raw) return std::nullopt;
    return parse_value<T>(*raw, where(key));
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void finish() const {
    if (!keys_.empty()) bad(where(*keys_.begin()), "unknown key");
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> keys_;
};

LatticeModel read_lattice(Section& s) {
  LatticeModel m;
  const auto kind = s.take("kind");
  if (!kind) bad(s.where("kind"), "missing");
  const auto parsed = parse_topology_kind(trim(*kind));
  if (!parsed) bad(s.where("kind"), "unknown topology '" + trim(*kind) + "'");
  m.kind = *parsed;
  if (auto n = s.number<Index>("n_sites")) m.n_sites = *n;
  else bad(s.where("n_sites"), "missing");
  if (auto e = s.take("edges")) m.edges = parse_edges(*e, s.where("edges"));
  if (m.kind == TopologyKind::Custom && m.edges.empty()) bad(s.where("edges"), "missing");
  if (auto v = s.number<double>("alpha")) m.alpha = *v;
  if (auto v = s.number<double>("beta")) m.beta = *v;
  if (auto v = s.number<double>("gamma")) m.gamma = *v;
  return m;
}

CavityParams read_cavity(Section& s) {
  CavityParams p;
  if (auto v = s.number<double>("epsilon_c")) p.epsilon_c = *v;
  else bad(s.where("epsilon_c"), "missing");
  if (auto v = s.number<double>("epsilon_a")) p.epsilon_a = *v;
  else p.epsilon_a = p.epsilon_c;
  if (auto v = s.number<double>("gamma")) p.gamma = *v;
  else bad(s.where("gamma"), "missing");
  p.n_molecules = s.number<long>("n_molecules");
  p.coupling = s.number<double>("coupling");
  p.number_density = s.number<double>("number_density");
  p.v_tilde = s.number<double>("v_tilde");
  p.mu_debye = s.number<double>("mu_debye");
  return p;
}

}  // namespace

Window<double> parse_grid(std::string_view text) {
  const std::string s = trim(text);
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos)
    bad("grid", "expected lo:hi:n, got '" + s + "'");
  Window<double> w{parse_value<double>(s.substr(0, a), "grid lo"),
                   parse_value<double>(s.substr(a + 1, b - a - 1), "grid hi"),
                   parse_value<Index>(s.substr(b + 1), "grid n")};
  if (!(w.lo < w.hi) || w.n_points < 2) bad("grid", "need lo < hi and n >= 2");
  return w;
}

RunConfig parse_config(std::string_view text, Command command) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::ConfigParse, "line " + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig cfg;
  cfg.command = command;
  for (const auto& [name, body] : tree) {
    if (body.empty()) bad(name, "key outside any section");
    Section s(name, body);
    if (name == "model" || name == "cavity") {
      if (cfg.model) bad("[" + name + "]", "only one of [model] and [cavity] may appear");
      if (name == "model") cfg.model = read_lattice(s);
      else cfg.model = read_cavity(s);
    } else if (name == "grid") {
      if (auto r = s.take("range")) cfg.grid.window = parse_grid(*r);
      const auto lo = s.number<double>("lo");
      const auto hi = s.number<double>("hi");
      const auto n = s.number<Index>("n");
      if (lo || hi || n) {
        if (!(lo && hi && n)) bad("[grid]", "lo, hi and n must be given together");
        if (cfg.grid.window) bad("[grid]", "give either range or lo/hi/n");
        if (!(*lo < *hi) || *n < 2) bad("[grid]", "need lo < hi and n >= 2");
        cfg.grid.window = Window<double>{*lo, *hi, *n};
      }
      cfg.grid.eta = s.number<double>("eta");
      if (auto v = s.number<double>("pad_factor")) cfg.grid.pad_factor = *v;
      if (auto v = s.number<Index>("min_points")) cfg.grid.min_points = *v;
    } else if (name == "ensemble") {
      if (auto v = s.number<long>("samples")) cfg.ensemble.samples = *v;
      if (auto v = s.number<std::uint64_t>("seed")) cfg.ensemble.seed = *v;
      if (auto d = s.take("distribution")) {
        cfg.ensemble.distribution = parse_distribution(trim(*d));
        if (!cfg.ensemble.distribution) bad(s.where("distribution"), "unknown '" + trim(*d) + "'");
      }
      cfg.ensemble.scale = s.number<double>("scale");
      if (auto v = s.number<double>("eta")) cfg.ensemble.eta = *v;
      if (auto v = s.number<unsigned>("threads")) cfg.ensemble.threads = *v;
    } else if (name == "output") {
      if (auto p = s.take("path")) cfg.output = trim(*p);
      if (auto c = s.take("columns")) cfg.columns = split_tokens(*c);
      if (auto q = s.take("quiet")) cfg.quiet = parse_bool(*q, s.where("quiet"));
    } else if (name == "analysis") {
      cfg.prominence = s.number<double>("prominence");
      if (auto v = s.number<double>("dip_half_width")) cfg.dip_half_width = *v;
    } else {
      bad("[" + name + "]", "unknown section");
    }
    s.finish();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Command command) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), command);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConfigParse) throw;
    throw Error(ErrorCode::ConfigParse, path.string() + ": " + e.what());
  }
}

}  // namespace cdis::app

#include "blowup/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n", "R", "reaction.kind", "reaction.p", "gradient.kind", "gradient.q", "gradient.K",
      "u0.kind", "u0.a", "u0.table", "u0.slope_delta", "u0.r_min_slope", "grid.N",
      "solver.dt0", "solver.u_cutoff", "solver.safety", "solver.t_max", "solver.snapshot_stride",
      "oracle.tol_T", "oracle.dt_factor", "oracle.horizon", "oracle.tail_samples_per_unit",
      "estimates.alpha", "estimates.exponent_delta", "estimates.epsilon_list",
      "estimates.u_max", "estimates.g_max", "estimates.grid_density", "analysis.r_min",
      "analysis.fit_window", "output.dir"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const KeyValueFile& file) : file_(file) {}

  std::string text(const std::string& key) const {
    auto v = file_.find(key);
    if (!v) throw Error(Errc::Config, "missing required key '" + key + "'");
    return *v;
  }

  double number(const std::string& key) const { return to_number(key, text(key)); }

  double number(const std::string& key, double fallback) const {
    auto v = file_.find(key);
    return v ? to_number(key, *v) : fallback;
  }

  int integer(const std::string& key) const { return to_integer(key, number(key)); }

  int integer(const std::string& key, int fallback) const {
    return file_.contains(key) ? integer(key) : fallback;
  }

 private:
  static double to_number(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw Error(Errc::Config, "key '" + key + "' expects a number, got '" + s + "'");
    return x;
  }

  static int to_integer(const std::string& key, double x) {
    if (x != std::floor(x)) throw Error(Errc::Config, "key '" + key + "' expects an integer");
    return static_cast<int>(x);
  }

  const KeyValueFile& file_;
};

/// Piecewise-linear interpolation through (r, u) rows of a two-column file.
std::function<double(double)> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open u0 table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double r = 0.0, u = 0.0;
    if (!(ls >> r >> u)) throw Error(Errc::Config, "bad row in u0 table: '" + line + "'");
    rows.emplace_back(r, u);
  }
  if (rows.size() < 2) throw Error(Errc::Config, "u0 table needs at least two rows");
  std::sort(rows.begin(), rows.end());
  return [rows](double r) {
    if (r <= rows.front().first) return rows.front().second;
    if (r >= rows.back().first) return rows.back().second;
    auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(r, -1e300));
    auto prev = it - 1;
    double w = (r - prev->first) / (it->first - prev->first);
    return (1.0 - w) * prev->second + w * it->second;
  };
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in) {
  KeyValueFile file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(Errc::Config, "line " + std::to_string(lineno) + ": empty key");
    if (!known_keys().count(key)) throw Error(Errc::Config, "unknown key '" + key + "'");
    file.entries_[key] = value;
  }
  return file;
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config '" + path.string() + "'");
  return parse(in);
}

std::optional<std::string> KeyValueFile::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t KeyValueFile::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& [k, v] : entries_) {
    mix(k);
    mix(v);
  }
  return h;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || used == 0)
      throw Error(Errc::Config, "bad number '" + item + "' in list");
    out.push_back(x);
  }
  return out;
}

RunConfig make_run_config(const KeyValueFile& file, int refine) {
  if (refine < 0) throw Error(Errc::Config, "--refine must be nonnegative");
  Reader rd(file);
  const int n = rd.integer("n");
  const double R = rd.number("R");
  const int N = rd.integer("grid.N") << refine;

  ReactionSpec reaction;
  std::string rk = rd.text("reaction.kind");
  if (rk == "exponential")
    reaction = ReactionSpec::exponential();
  else if (rk == "power")
    reaction = ReactionSpec::power(rd.number("reaction.p"));
  else
    throw Error(Errc::Config, "reaction.kind must be 'exponential' or 'power'");

  GradientTermSpec gradient;
  std::string gk = rd.text("gradient.kind");
  if (gk == "none")
    gradient = GradientTermSpec::none();
  else if (gk == "power")
    gradient = GradientTermSpec::power(rd.number("gradient.q", 2.0), rd.number("gradient.K", 1.0));
  else
    throw Error(Errc::Config, "gradient.kind must be 'none' or 'power'");

  std::function<double(double)> u0;
  std::string uk = rd.text("u0.kind");
  if (uk == "zero") {
    u0 = [](double) { return 0.0; };
  } else if (uk == "parabolic") {
    double a = rd.number("u0.a");
    u0 = [a, R](double r) { return a * (R * R - r * r); };
  } else if (uk == "linear") {
    double a = rd.number("u0.a");
    u0 = [a, R](double r) { return a * (R - r); };
  } else if (uk == "table") {
    u0 = load_table(rd.text("u0.table"));
  } else {
    throw Error(Errc::Config, "u0.kind must be zero, parabolic, linear or table");
  }

  std::optional<double> r_min_slope;
  if (file.contains("u0.r_min_slope")) r_min_slope = rd.number("u0.r_min_slope");
  RadialGrid grid(R, N);
  RunConfig cfg{make_problem(n, R, reaction, gradient, u0, grid,
                             rd.number("u0.slope_delta", 0.0), r_min_slope),
                {}, {}, {}, {}, {}, file.hash()};

  const double scale = std::ldexp(1.0, -refine);
  SolverConfig& s = cfg.solver;
  s.dt0 = rd.number("solver.dt0", s.dt0) * scale;
  s.u_cutoff = rd.number("solver.u_cutoff", s.u_cutoff);
  s.safety = rd.number("solver.safety", s.safety);
  s.t_max = rd.number("solver.t_max", s.t_max);
  s.snapshot_stride = rd.integer("solver.snapshot_stride", s.snapshot_stride) << (2 * refine);
  validate(s, cfg.problem);

  OracleConfig& o = cfg.oracle;
  o.tol_T = rd.number("oracle.tol_T", o.tol_T);
  o.dt_factor = rd.number("oracle.dt_factor", o.dt_factor);
  o.horizon = rd.number("oracle.horizon", o.horizon);
  o.tail_samples_per_unit = rd.integer("oracle.tail_samples_per_unit", o.tail_samples_per_unit);
  o.u_cutoff = s.u_cutoff;

  EstimatesConfig& e = cfg.estimates;
  e.alpha = rd.number("estimates.alpha", e.alpha);
  e.exponent_delta = rd.number("estimates.exponent_delta", e.exponent_delta);
  if (file.contains("estimates.epsilon_list"))
    e.epsilon_list = parse_number_list(rd.text("estimates.epsilon_list"));
  e.u_max = rd.number("estimates.u_max", e.u_max);
  e.g_max = rd.number("estimates.g_max", e.g_max);
  e.grid_density = rd.integer("estimates.grid_density", e.grid_density);
  if (e.epsilon_list.empty()) throw Error(Errc::Config, "estimates.epsilon_list is empty");
  if (e.grid_density < 2) throw Error(Errc::Config, "estimates.grid_density must be >= 2");

  AnalysisConfig& a = cfg.analysis;
  a.r_min = rd.number("analysis.r_min", 0.05 * R);
  if (file.contains("analysis.fit_window")) {
    auto w = parse_number_list(rd.text("analysis.fit_window"));
    if (w.size() != 2 || !(w[0] > w[1]))
      throw Error(Errc::Config, "analysis.fit_window expects 'lo, hi' offsets below u_cutoff with lo > hi");
    a.fit_window_lo = w[0];
    a.fit_window_hi = w[1];
  }

  if (auto dir = file.find("output.dir")) cfg.output_dir = *dir;
  return cfg;
}

}  // namespace blowup

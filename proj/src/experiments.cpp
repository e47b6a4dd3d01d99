#include "nmrsp/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nmrsp/channels.hpp"
#include "nmrsp/measures.hpp"

#ifndef NMRSP_VERSION
#define NMRSP_VERSION "0.0.0"
#endif

namespace nmrsp {

using std::numbers::pi;
using json = nlohmann::json;

namespace {

void require_count(const std::optional<GridRange>& r, const char* name) {
  if (!r) return;
  if (r->count < 1) throw InvalidInput(std::string("config: ") + name + ".count must be at least 1");
  if (!std::isfinite(r->min) || !std::isfinite(r->max) || r->max < r->min) {
    throw InvalidInput(std::string("config: ") + name + " must satisfy min <= max");
  }
}

double fig3_tau_c(const ExperimentConfig& c) {
  const double dw = c.dephasing.delta_omega();
  return c.figure == Figure::fig3a ? 1.5 * pi / dw : 2.0 * pi / dw;
}

SearchOptions search_options(const ExperimentConfig& c, std::size_t n_pairs) {
  SearchOptions o;
  o.n_pairs = n_pairs;
  o.grid_size = c.grid_size;
  o.seed = c.seed;
  o.alpha_count = c.alpha_count;
  o.phase_count = c.phase_count;
  o.threads = c.threads;
  return o;
}

double fidelity_after_dephasing(const BellDiagonalParams& c, cdouble kappa) {
  return rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal(c), kappa)));
}

double fidelity_after_damping(const BellDiagonalParams& c, double chi_value) {
  return rsp_fidelity(correlation_matrix(apply_amplitude_damping(bell_diagonal(c), chi_value)));
}

json range_json(const std::optional<GridRange>& r) {
  if (!r) return nullptr;
  return json{{"min", r->min}, {"max", r->max}, {"count", r->count}};
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidInput(std::string("config: unknown key '") + key + "' in " + where);
  }
}

std::optional<GridRange> read_range(const json& j, const char* key, std::optional<GridRange> current) {
  if (!j.contains(key)) return current;
  const json& r = j.at(key);
  if (r.is_null()) return std::nullopt;
  reject_unknown(r, {"min", "max", "count"}, key);
  GridRange out = current.value_or(GridRange{});
  read_if(r, "min", out.min);
  read_if(r, "max", out.max);
  read_if(r, "count", out.count);
  return out;
}

}  // namespace

std::string_view to_string(Figure figure) noexcept {
  switch (figure) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3a: return "fig3a";
    case Figure::fig3b: return "fig3b";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
  }
  return "fig1";
}

std::optional<Figure> parse_figure(std::string_view name) noexcept {
  for (Figure f : {Figure::fig1, Figure::fig2, Figure::fig3a, Figure::fig3b, Figure::fig4, Figure::fig5}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<double> GridRange::points() const {
  if (count < 1) throw InvalidInput("GridRange: count must be at least 1");
  if (count == 1) return {min};
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  out.back() = max;
  return out;
}

ExperimentConfig default_config(Figure figure) {
  ExperimentConfig c;
  c.figure = figure;
  return resolve(c);
}

ExperimentConfig resolve(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.dephasing.validate();
  c.lorentz.validate();
  for (const auto& b : c.bell) (void)bell_diagonal(b);
  if (c.grid_size < 2) throw InvalidInput("config: grid must be at least 2");
  if (c.alpha_count < 1 || c.phase_count < 1) throw InvalidInput("config: optimal-pair grid counts must be >= 1");
  require_count(c.tau_c, "tau_c");
  require_count(c.theta, "theta");
  require_count(c.t_c, "t_c");
  require_count(c.ratio, "ratio");

  const double dw = c.dephasing.delta_omega();
  const double lo = pi / dw;
  const double hi = 2.0 * pi / dw;
  switch (c.figure) {
    case Figure::fig1:
      if (!c.tau_c) c.tau_c = GridRange{lo + (hi - lo) / 25.0, hi, 25};
      if (!(c.tau_c->min > 0.0)) throw InvalidInput("config: fig1 control times must be positive");
      break;
    case Figure::fig2:
      if (!c.tau_c) c.tau_c = GridRange{lo + (hi - lo) / 10.0, hi, 10};
      if (!c.theta) c.theta = GridRange{0.0, pi / 2.0, 21};
      if (!(c.tau_c->min > lo) || c.tau_c->max > hi * (1.0 + 1e-5)) {
        throw InvalidInput("config: fig2 control times must lie in (pi/dw, 2 pi/dw]");
      }
      if (c.theta->min < 0.0 || c.theta->max > pi / 2.0 + 1e-12) {
        throw InvalidInput("config: fig2 theta range must lie in [0, pi/2]");
      }
      break;
    case Figure::fig3a:
    case Figure::fig3b:
      if (!c.theta) {
        const auto tp = transition_thetas(dw, c.dephasing.sigma, fig3_tau_c(c));
        c.theta = GridRange{tp.theta1, tp.theta2, 25};
      }
      if (c.theta->min < 0.0 || c.theta->max > pi / 2.0 + 1e-12) {
        throw InvalidInput("config: fig3 theta range must lie in [0, pi/2]");
      }
      break;
    case Figure::fig4: {
      const double revival = lorentz_revival_time(c.lorentz);
      if (!c.t_c) c.t_c = GridRange{revival / 25.0, revival, 25};
      if (!(c.t_c->min > 0.0)) throw InvalidInput("config: fig4 control times must be positive");
      break;
    }
    case Figure::fig5:
      if (!c.ratio) c.ratio = GridRange{1e-3, 2.0 - 1e-3, 20};
      if (!(c.ratio->min > 0.0) || !(c.ratio->max < 2.0)) {
        throw InvalidInput("config: fig5 ratio range must lie inside (0, 2)");
      }
      break;
  }
  return c;
}

void apply_config_json(ExperimentConfig& c, std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  try {
    reject_unknown(j, {"figure", "dephasing", "lorentz", "grids", "bell", "search", "threads", "output"}, "config");
    if (j.contains("figure")) {
      const auto f = parse_figure(j.at("figure").get<std::string>());
      if (!f) throw InvalidInput("config: unknown figure '" + j.at("figure").get<std::string>() + "'");
      c.figure = *f;
    }
    if (j.contains("dephasing")) {
      const json& d = j.at("dephasing");
      reject_unknown(d, {"theta", "omega1", "omega2", "sigma"}, "dephasing");
      read_if(d, "theta", c.dephasing.theta);
      read_if(d, "omega1", c.dephasing.omega1);
      read_if(d, "omega2", c.dephasing.omega2);
      read_if(d, "sigma", c.dephasing.sigma);
    }
    if (j.contains("lorentz")) {
      const json& l = j.at("lorentz");
      reject_unknown(l, {"gamma0", "Gamma"}, "lorentz");
      read_if(l, "gamma0", c.lorentz.gamma0);
      read_if(l, "Gamma", c.lorentz.Gamma);
    }
    if (j.contains("grids")) {
      const json& g = j.at("grids");
      reject_unknown(g, {"tau_c", "theta", "t_c", "ratio"}, "grids");
      c.tau_c = read_range(g, "tau_c", c.tau_c);
      c.theta = read_range(g, "theta", c.theta);
      c.t_c = read_range(g, "t_c", c.t_c);
      c.ratio = read_range(g, "ratio", c.ratio);
    }
    if (j.contains("bell")) {
      const json& b = j.at("bell");
      if (!b.is_array() || b.size() != 2) throw InvalidInput("config: bell must hold two [c1, c2, c3] triples");
      for (std::size_t k = 0; k < 2; ++k) {
        const auto v = b.at(k).get<std::vector<double>>();
        if (v.size() != 3) throw InvalidInput("config: bell triples need three entries");
        c.bell[k] = {v[0], v[1], v[2]};
      }
    }
    if (j.contains("search")) {
      const json& s = j.at("search");
      reject_unknown(s, {"pairs", "grid", "seed", "alpha_count", "phase_count"}, "search");
      read_if(s, "pairs", c.n_pairs);
      read_if(s, "grid", c.grid_size);
      read_if(s, "seed", c.seed);
      read_if(s, "alpha_count", c.alpha_count);
      read_if(s, "phase_count", c.phase_count);
    }
    read_if(j, "threads", c.threads);
    read_if(j, "output", c.output);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config_file(const std::string& path, Figure figure) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig c;
  c.figure = figure;
  apply_config_json(c, buffer.str());
  return c;
}

std::string config_json(const ExperimentConfig& c) {
  json j;
  j["figure"] = std::string(to_string(c.figure));
  j["dephasing"] = {{"theta", c.dephasing.theta},
                    {"omega1", c.dephasing.omega1},
                    {"omega2", c.dephasing.omega2},
                    {"sigma", c.dephasing.sigma}};
  j["lorentz"] = {{"gamma0", c.lorentz.gamma0}, {"Gamma", c.lorentz.Gamma}};
  j["grids"] = {{"tau_c", range_json(c.tau_c)},
                {"theta", range_json(c.theta)},
                {"t_c", range_json(c.t_c)},
                {"ratio", range_json(c.ratio)}};
  j["bell"] = json::array();
  for (const auto& b : c.bell) j["bell"].push_back({b.c1, b.c2, b.c3});
  j["search"] = {{"pairs", c.n_pairs},
                 {"grid", c.grid_size},
                 {"seed", c.seed},
                 {"alpha_count", c.alpha_count},
                 {"phase_count", c.phase_count}};
  j["threads"] = c.threads;
  j["output"] = c.output;
  return j.dump(2);
}

void CsvTable::validate() const {
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InvalidInput("CsvTable: ragged row");
    for (double x : row) {
      if (!std::isfinite(x)) throw InvalidInput("CsvTable: non-finite value");
    }
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

std::string CsvTable::to_csv() const {
  validate();
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_number(row[k]);
    }
    out += '\n';
  }
  return out;
}

CsvTable run_fig1(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.figure = Figure::fig1;
  c = resolve(c);
  const auto ends = c.tau_c->points();
  const BlpSweep sweep = blp_sweep(ChannelFamily{c.dephasing}, 0.0, ends, search_options(c, c.n_pairs));
  CsvTable table{{"tau_c", "integral_optimal", "integral_random_max"}, {}};
  for (std::size_t k = 0; k < ends.size(); ++k) table.rows.push_back({ends[k], sweep.optimal[k], sweep.random_max[k]});
  return table;
}

CsvTable run_fig2(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.figure = Figure::fig2;
  c = resolve(c);
  const auto taus = c.tau_c->points();
  const auto thetas = c.theta->points();
  const double dw = c.dephasing.delta_omega();

  // numeric[i][k]: theta_i, tau_k
  std::vector<std::vector<double>> numeric;
  for (double th : thetas) {
    DephasingSpec spec = c.dephasing;
    spec.theta = th;
    numeric.push_back(blp_sweep(ChannelFamily{spec}, 0.0, taus, search_options(c, 0)).optimal);
  }

  CsvTable table{{"tau_c", "theta", "N_analytic", "N_numeric", "theta1", "theta2"}, {}};
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const auto tp = transition_thetas(dw, c.dephasing.sigma, taus[k]);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      DephasingSpec spec = c.dephasing;
      spec.theta = thetas[i];
      table.rows.push_back(
          {taus[k], thetas[i], analytic_blp_dephasing(spec, taus[k]), numeric[i][k], tp.theta1, tp.theta2});
    }
  }
  return table;
}

CsvTable run_fig3(const ExperimentConfig& config) {
  if (config.figure != Figure::fig3a && config.figure != Figure::fig3b) {
    throw InvalidInput("run_fig3: figure must be fig3a or fig3b");
  }
  const ExperimentConfig c = resolve(config);
  const double tau_c = fig3_tau_c(c);
  CsvTable table{{"theta", "N", "F1", "F2"}, {}};
  for (double th : c.theta->points()) {
    DephasingSpec spec = c.dephasing;
    spec.theta = th;
    const cdouble kappa = kappa_complex(spec, tau_c);
    table.rows.push_back({th, analytic_blp_dephasing(spec, tau_c), fidelity_after_dephasing(c.bell[0], kappa),
                          fidelity_after_dephasing(c.bell[1], kappa)});
  }
  return table;
}

CsvTable run_fig4(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.figure = Figure::fig4;
  c = resolve(c);
  if (!(c.lorentz.Gamma < 2.0 * c.lorentz.gamma0)) throw InvalidInput("fig4: requires Gamma / gamma0 < 2");
  const auto ends = c.t_c->points();
  const BlpSweep sweep = blp_sweep(ChannelFamily{c.lorentz}, 0.0, ends, search_options(c, c.n_pairs));
  CsvTable table{{"t_c", "integral_optimal", "integral_random_max"}, {}};
  for (std::size_t k = 0; k < ends.size(); ++k) table.rows.push_back({ends[k], sweep.optimal[k], sweep.random_max[k]});
  return table;
}

CsvTable run_fig5(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.figure = Figure::fig5;
  c = resolve(c);
  CsvTable table{{"ratio", "N", "F1", "F2"}, {}};
  for (double r : c.ratio->points()) {
    const LorentzSpec spec{c.lorentz.gamma0, r * c.lorentz.gamma0};
    const double t_c = lorentz_revival_time(spec);
    const double n = std::exp(-pi * spec.Gamma / spec.epsilon());
    const double chi_c = chi(spec, t_c);
    table.rows.push_back({r, n, fidelity_after_damping(c.bell[0], chi_c), fidelity_after_damping(c.bell[1], chi_c)});
  }
  return table;
}

CsvTable run_figure(const ExperimentConfig& config) {
  switch (config.figure) {
    case Figure::fig1: return run_fig1(config);
    case Figure::fig2: return run_fig2(config);
    case Figure::fig3a:
    case Figure::fig3b: return run_fig3(config);
    case Figure::fig4: return run_fig4(config);
    case Figure::fig5: return run_fig5(config);
  }
  throw InvalidInput("run_figure: unknown figure");
}

void write_outputs(const ExperimentConfig& config, const CsvTable& table) {
  if (config.output.empty()) throw InvalidInput("write_outputs: no output path");
  const std::string csv = table.to_csv();
  {
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw Error("cannot open '" + config.output + "' for writing");
    out << csv;
    if (!out) throw Error("failed writing '" + config.output + "'");
  }
  const std::string meta_path = config.output + ".meta.json";
  json meta;
  meta["config"] = json::parse(config_json(resolve(config)));
  meta["seed"] = config.seed;
  meta["version"] = std::string(library_version());
  meta["columns"] = table.header;
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw Error("cannot open '" + meta_path + "' for writing");
  out << meta.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + meta_path + "'");
}

std::string_view library_version() noexcept { return NMRSP_VERSION; }

}  // namespace nmrsp

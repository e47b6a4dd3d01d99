// nmrsp: figure data and single-value evaluations from the command line.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nmrsp/channels.hpp"
#include "nmrsp/decoherence.hpp"
#include "nmrsp/experiments.hpp"
#include "nmrsp/measures.hpp"
#include "nmrsp/rsp.hpp"

namespace {

using namespace nmrsp;
using std::numbers::pi;

struct FigureFlags {
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  std::size_t grid = 0;
  unsigned threads = 0;
  std::string out;
  std::string config;
};

struct SpecFlags {
  DephasingSpec dephasing{pi / 4, 0.0, 10.0, 1.0};
  double dw = 10.0;
  LorentzSpec lorentz{1.0, 0.1};
};

void add_dephasing_flags(CLI::App* cmd, SpecFlags& s) {
  cmd->add_option("--theta", s.dephasing.theta, "environment mixing angle in [0, pi/2]")->capture_default_str();
  cmd->add_option("--w1", s.dephasing.omega1, "first peak frequency")->capture_default_str();
  cmd->add_option("--dw", s.dw, "peak separation omega2 - omega1")->capture_default_str();
  cmd->add_option("--sigma", s.dephasing.sigma, "peak width")->capture_default_str();
}

void add_lorentz_flags(CLI::App* cmd, SpecFlags& s) {
  cmd->add_option("--gamma0", s.lorentz.gamma0, "coupling strength")->capture_default_str();
  cmd->add_option("--Gamma", s.lorentz.Gamma, "spectral width")->capture_default_str();
}

DephasingSpec dephasing_of(const SpecFlags& s) {
  DephasingSpec d = s.dephasing;
  d.omega2 = d.omega1 + s.dw;
  d.validate();
  return d;
}

void print_kv(const std::string& key, double value) { std::cout << key << '=' << format_number(value) << '\n'; }

int run_figure_command(Figure figure, const CLI::App& cmd, const FigureFlags& f) {
  ExperimentConfig config;
  config.figure = figure;
  if (cmd.count("--config")) config = load_config_file(f.config, figure);
  config.figure = figure;
  if (cmd.count("--seed")) config.seed = f.seed;
  if (cmd.count("--pairs")) config.n_pairs = f.pairs;
  if (cmd.count("--grid")) config.grid_size = f.grid;
  if (cmd.count("--threads")) config.threads = f.threads;
  if (cmd.count("--out")) config.output = f.out;
  config = resolve(config);

  const CsvTable table = run_figure(config);
  if (config.output.empty() || config.output == "-") {
    std::cout << table.to_csv();
  } else {
    write_outputs(config, table);
  }
  return 0;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Markovian dephasing / damping channels and remote state preparation fidelity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  FigureFlags fig_flags;
  std::vector<std::pair<Figure, CLI::App*>> figure_cmds;
  for (Figure f : {Figure::fig1, Figure::fig2, Figure::fig3a, Figure::fig3b, Figure::fig4, Figure::fig5}) {
    auto* cmd = app.add_subcommand(std::string(to_string(f)), "write the data of " + std::string(to_string(f)) + " as CSV");
    cmd->add_option("--seed", fig_flags.seed, "base seed of the random pair streams (default 42)");
    cmd->add_option("--pairs", fig_flags.pairs, "number of random pairs (default 10000)");
    cmd->add_option("--grid", fig_flags.grid, "time grid points (default 4001)")->check(CLI::Range(2ul, 100000000ul));
    cmd->add_option("--threads", fig_flags.threads, "worker threads, 0 = all cores (default 0)");
    cmd->add_option("--out", fig_flags.out, "CSV path; a .meta.json file is written next to it (default stdout)");
    cmd->add_option("--config", fig_flags.config, "JSON config file")->check(CLI::ExistingFile);
    figure_cmds.emplace_back(f, cmd);
  }

  SpecFlags spec;

  auto* kappa_cmd = app.add_subcommand("kappa", "decoherence function kappa(tau) of the dephasing family");
  double tau = 0.0;
  bool quadrature = false;
  add_dephasing_flags(kappa_cmd, spec);
  kappa_cmd->add_option("--tau", tau, "reduced time")->required();
  kappa_cmd->add_flag("--quadrature", quadrature, "evaluate the spectral integral numerically");

  auto* chi_cmd = app.add_subcommand("chi", "decoherence function chi(t) of the Lorentzian damping family");
  double t = 0.0;
  add_lorentz_flags(chi_cmd, spec);
  chi_cmd->add_option("--t", t, "time")->required();

  auto* measure_cmd = app.add_subcommand("measure", "non-Markovianity measure over a time window");
  std::string kind = "blp";
  std::string family_name = "dephasing";
  double t0 = 0.0;
  double t1 = -1.0;
  SearchOptions search;
  measure_cmd->add_option("--kind", kind, "blp | divisibility | entanglement | mutual_info")
      ->check(CLI::IsMember({"blp", "divisibility", "entanglement", "mutual_info"}))
      ->capture_default_str();
  measure_cmd->add_option("--family", family_name, "dephasing | lorentz")
      ->check(CLI::IsMember({"dephasing", "lorentz"}))
      ->capture_default_str();
  add_dephasing_flags(measure_cmd, spec);
  add_lorentz_flags(measure_cmd, spec);
  measure_cmd->add_option("--t0", t0, "window start")->capture_default_str();
  measure_cmd->add_option("--t1", t1, "window end (default: first revival time)");
  measure_cmd->add_option("--grid", search.grid_size, "time grid points")->capture_default_str();
  measure_cmd->add_option("--pairs", search.n_pairs, "random pairs for blp")->capture_default_str();
  measure_cmd->add_option("--seed", search.seed, "base seed")->capture_default_str();
  measure_cmd->add_option("--threads", search.threads, "worker threads, 0 = all cores")->capture_default_str();

  auto* fid_cmd = app.add_subcommand("fidelity", "RSP fidelity of a Bell-diagonal state after a channel");
  std::vector<double> cs;
  double kre = 1.0;
  double kim = 0.0;
  std::string channel = "dephasing";
  fid_cmd->add_option("--c", cs, "c1,c2,c3")->delimiter(',')->expected(3)->required();
  fid_cmd->add_option("--kappa", kre, "decoherence value (real part for dephasing, chi for damping)")
      ->capture_default_str();
  fid_cmd->add_option("--kappa-im", kim, "imaginary part of kappa")->capture_default_str();
  fid_cmd->add_option("--channel", channel, "dephasing | damping")
      ->check(CLI::IsMember({"dephasing", "damping"}))
      ->capture_default_str();

  auto* tr_cmd = app.add_subcommand("transition", "sudden transition angles theta1, theta2");
  double dw = 10.0;
  double sigma = 1.0;
  double tauc = 0.0;
  tr_cmd->add_option("--dw", dw, "peak separation")->capture_default_str();
  tr_cmd->add_option("--sigma", sigma, "peak width")->capture_default_str();
  tr_cmd->add_option("--tauc", tauc, "control time")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "nmrsp: usage: " << e.what() << " (see --help)\n";
    return 2;
  }

  try {
    for (const auto& [figure, cmd] : figure_cmds) {
      if (cmd->parsed()) return run_figure_command(figure, *cmd, fig_flags);
    }
    if (kappa_cmd->parsed()) {
      const DephasingSpec d = dephasing_of(spec);
      const cdouble k = quadrature ? kappa_quadrature(d, tau) : kappa_complex(d, tau);
      print_kv("abs", quadrature ? std::abs(k) : kappa_abs(d, tau));
      print_kv("re", k.real());
      print_kv("im", k.imag());
    } else if (chi_cmd->parsed()) {
      print_kv("chi", chi(spec.lorentz, t));
    } else if (measure_cmd->parsed()) {
      ChannelFamily family = family_name == "lorentz" ? ChannelFamily{spec.lorentz} : ChannelFamily{dephasing_of(spec)};
      if (t1 < 0.0) {
        t1 = family_name == "lorentz" ? lorentz_revival_time(spec.lorentz) : 2.0 * pi / spec.dw;
      }
      const TimeWindow window{t0, t1};
      MeasureReport report;
      if (kind == "blp") {
        report = blp_search(family, window, search);
      } else if (kind == "divisibility") {
        report = divisibility_measure(family, window, search.grid_size);
      } else if (kind == "entanglement") {
        report = entanglement_measure(family, window, search.grid_size);
      } else {
        report = mutual_info_measure(family, window, search.grid_size);
      }
      std::cout << "kind=" << to_string(report.kind) << '\n';
      if (report.infinite()) {
        std::cout << "value=inf\n";
      } else {
        print_kv("value", report.value);
      }
      if (report.singular_time) print_kv("singular_time", *report.singular_time);
      std::cout << "backflow=";
      for (std::size_t k = 0; k < report.backflow.size(); ++k) {
        if (k) std::cout << ';';
        std::cout << format_number(report.backflow[k].begin) << ':' << format_number(report.backflow[k].end);
      }
      std::cout << '\n';
    } else if (fid_cmd->parsed()) {
      const DensityMatrix rho = bell_diagonal({cs[0], cs[1], cs[2]});
      const DensityMatrix out =
          channel == "damping" ? apply_amplitude_damping(rho, kre) : apply_dephasing(rho, cdouble{kre, kim});
      print_kv("fidelity", rsp_fidelity(correlation_matrix(out)));
    } else if (tr_cmd->parsed()) {
      const TransitionPoints tp = transition_thetas(dw, sigma, tauc);
      print_kv("theta1", tp.theta1);
      print_kv("theta2", tp.theta2);
    }
  } catch (const std::exception& e) {
    std::cerr << "nmrsp: error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

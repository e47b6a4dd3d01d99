// Acceptance suite. One PASS/FAIL line per criterion; exit status is nonzero if
// any selected criterion fails.
//
//   acceptance [--criterion N]... [--cli path/to/nmrsp]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmrsp/channels.hpp"
#include "nmrsp/decoherence.hpp"
#include "nmrsp/experiments.hpp"
#include "nmrsp/measures.hpp"
#include "nmrsp/rsp.hpp"
#include "oracles.hpp"

using namespace nmrsp;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kTolPairLaw = 1e-9;
constexpr double kTolStrictGap = 1e-6;
constexpr double kTolClosedForm = 1e-6;
constexpr double kTolTransition = 1e-6;
constexpr double kTolSymmetric = 1e-9;
constexpr double kTolMeasureIdentity = 1e-9;
constexpr double kTolEntanglementVsBlp = 1e-8;
constexpr double kTolEigen = 1e-10;
constexpr double kTolFidelity = 1e-12;
constexpr double kTolSpread = 1e-12;
constexpr double kTolLorentz = 1e-6;
constexpr double kTolQuadrature = 1e-8;
constexpr double kTolDerivative = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

DephasingSpec dephasing(double theta) { return DephasingSpec{theta, 0.0, 10.0, 1.0}; }

// |kappa| written out directly from the two-peak spectrum.
double kappa_abs_direct(const DephasingSpec& s, double tau) {
  const std::complex<double> i(0.0, 1.0);
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const auto sum = c * c * std::exp(i * s.omega1 * tau) + sn * sn * std::exp(i * s.omega2 * tau);
  return std::exp(-0.5 * s.sigma * s.sigma * tau * tau) * std::abs(sum);
}

double n_unclamped(double theta, double tau_c) {
  const DephasingSpec s = dephasing(theta);
  const double delta = std::abs(std::cos(2 * theta)) * std::exp(-0.5 * std::pow(pi * s.sigma / s.delta_omega(), 2));
  return kappa_abs_direct(s, tau_c) - delta;
}

ExperimentConfig fig1_defaults() {
  ExperimentConfig c;
  c.figure = Figure::fig1;
  return c;
}

Outcome criterion1() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ua(0.0, 1.0), up(0.0, 2 * pi);
  const auto grid = uniform_grid({0.0, 2 * pi / 10}, 200);
  double worst = 0.0;
  for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
    const ChannelFamily fam{dephasing(theta)};
    for (int k = 0; k < 10; ++k) {
      const double alpha = ua(rng), phase = up(rng);
      const PairVariant variant = k % 2 ? PairVariant::eta : PairVariant::zeta;
      const StatePair pair = optimal_pairs(alpha, phase, variant);
      for (double t : grid) {
        const double d = trace_distance(evolve(fam, pair.rho1, t), evolve(fam, pair.rho2, t));
        worst = std::max(worst, std::abs(d - kappa_abs_direct(dephasing(theta), t)));
      }
    }
  }
  return {worst <= kTolPairLaw, "max deviation " + fmt(worst)};
}

Outcome criterion2() {
  const CsvTable t = run_fig1(fig1_defaults());
  bool ok = t.rows.size() == 25;
  double min_gap = 1e300;
  for (const auto& row : t.rows) {
    const double gap = row[1] - row[2];
    min_gap = std::min(min_gap, gap);
    ok = ok && row[2] <= row[1] && gap > kTolStrictGap;
  }
  return {ok, std::to_string(t.rows.size()) + " rows, min(optimal - random) " + fmt(min_gap)};
}

Outcome criterion3() {
  SearchOptions opt;
  opt.n_pairs = 0;
  opt.grid_size = 10001;
  Outcome out;
  int failures = 0;
  double worst = 0.0;
  for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
    for (double tau_c : {1.2 * pi / 10, 1.5 * pi / 10, 2 * pi / 10}) {
      const double analytic = analytic_blp_dephasing(dephasing(theta), tau_c);
      const double numeric = blp_search(ChannelFamily{dephasing(theta)}, {0.0, tau_c}, opt).value;
      const double diff = std::abs(analytic - numeric);
      worst = std::max(worst, diff);
      if (diff > kTolClosedForm) ++failures;
    }
  }
  out.pass = failures == 0;
  out.detail = std::to_string(9 - failures) + "/9 within tolerance, max |analytic - numeric| " + fmt(worst);
  return out;
}

Outcome criterion4() {
  double worst = 0.0;
  for (double tau_c : {1.2 * pi / 10, 1.5 * pi / 10, 2 * pi / 10}) {
    const auto tp = transition_thetas(10.0, 1.0, tau_c);
    const double t1 = oracle::bisect([&](double th) { return n_unclamped(th, tau_c); }, 0.0, pi / 4);
    const double t2 = oracle::bisect([&](double th) { return n_unclamped(th, tau_c); }, pi / 4, pi / 2);
    worst = std::max({worst, std::abs(tp.theta1 - t1), std::abs(tp.theta2 - t2)});
  }
  const auto rev = transition_thetas(10.0, 1.0, 2 * pi / 10);
  const double sym = std::abs(rev.theta2 - (pi / 2 - rev.theta1));
  return {worst <= kTolTransition && sym <= kTolSymmetric,
          "max root deviation " + fmt(worst) + ", symmetry defect " + fmt(sym)};
}

Outcome criterion5() {
  Outcome out;
  double worst_neg = 0.0, worst_mi = 0.0, worst_ne = 0.0, worst_cell = 0.0;
  bool intervals_ok = true;
  const Bipartition split{4, 4};
  for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
    const DephasingSpec s = dephasing(theta);
    const ChannelFamily fam{s};
    for (double t : uniform_grid({0.0, 2 * pi / 10}, 100)) {
      const ChoiState c = choi_state(fam, t, 4);
      const double k = kappa_abs_direct(s, t);
      worst_neg = std::max(worst_neg, std::abs(negativity(c.state, split) - (k + 0.5)));
      worst_mi = std::max(worst_mi, std::abs(mutual_information(c) - (4.0 - oracle::binary_entropy((1 - k) / 2))));
    }

    const std::size_t n = 4001;
    const TimeWindow w{0.0, 2 * pi / 10};
    SearchOptions opt;
    opt.n_pairs = 0;
    opt.grid_size = n;
    const MeasureReport blp = blp_search(fam, w, opt);
    const MeasureReport ne = entanglement_measure(fam, w, n);
    worst_ne = std::max(worst_ne, std::abs(ne.value - blp.value));

    const MeasureReport div = divisibility_measure(fam, w, n);
    const double cell = (w.end - w.begin) / (n - 1);
    if (div.backflow.size() != blp.backflow.size()) {
      intervals_ok = false;
      continue;
    }
    for (std::size_t i = 0; i < blp.backflow.size(); ++i) {
      worst_cell = std::max({worst_cell, std::abs(div.backflow[i].begin - blp.backflow[i].begin) / cell,
                             std::abs(div.backflow[i].end - blp.backflow[i].end) / cell});
    }
  }
  intervals_ok = intervals_ok && worst_cell <= 1.0;

  bool infinite_ok = true;
  const ChannelFamily quarter{dephasing(pi / 4)};
  for (TimeWindow w : {TimeWindow{0.0, 2 * pi / 10}, TimeWindow{0.2, 0.5}, TimeWindow{pi / 10 - 0.01, 0.6},
                       TimeWindow{0.0, 4 * pi / 10}}) {
    infinite_ok = infinite_ok && divisibility_measure(quarter, w, 4001).infinite();
  }
  out.pass = worst_neg <= kTolMeasureIdentity && worst_mi <= kTolMeasureIdentity &&
             worst_ne <= kTolEntanglementVsBlp && intervals_ok && infinite_ok;
  out.detail = "negativity " + fmt(worst_neg) + ", mutual info " + fmt(worst_mi) + ", N_E vs BLP " + fmt(worst_ne) +
               ", interval offset " + fmt(worst_cell) + " cells" + (intervals_ok ? "" : " (mismatch)") +
               (infinite_ok ? ", N_D infinite" : ", N_D finite where a zero is enclosed");
  return out;
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ph(0.0, 2 * pi), mag(0.0, 1.0);
  double worst = 0.0;
  int triples = 0;
  while (triples < 50) {
    const BellDiagonalParams c{u(rng), u(rng), u(rng)};
    const auto w = c.weights();
    if (std::any_of(w.begin(), w.end(), [](double x) { return x < 0.0; })) continue;
    ++triples;
    for (int j = 0; j < 20; ++j) {
      const std::complex<double> kappa = std::polar(mag(rng), ph(rng));
      const auto ev = gram_eigenvalues(correlation_matrix(apply_dephasing(bell_diagonal(c), kappa)));
      std::array<double, 3> expect{c.c1 * c.c1 * std::norm(kappa), c.c2 * c.c2 * std::norm(kappa), c.c3 * c.c3};
      std::sort(expect.begin(), expect.end());
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(ev[i] - expect[i]));
    }
  }
  const double f = rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal({1, -1, 1}), 0.5)));
  const double fdev = std::abs(f - 0.25);
  return {worst <= kTolEigen && fdev <= kTolFidelity, "eigenvalue deviation " + fmt(worst) + ", F - 0.25 " + fmt(fdev)};
}

Outcome criterion7() {
  const double tau_c = 2 * pi / 10;
  bool ok = true;
  std::string detail;
  for (const BellDiagonalParams& c : {BellDiagonalParams{1, -1, 1}, BellDiagonalParams{-0.5, 0.4, 0.8}}) {
    double lo = 2.0, hi = -1.0;
    for (int i = 0; i < 50; ++i) {
      const double f =
          rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal(c), kappa_complex(dephasing(pi / 2 * i / 49), tau_c))));
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    const double expect = 0.5 * (c.c1 * c.c1 + c.c2 * c.c2) * std::exp(-tau_c * tau_c);
    const double dev = std::max(std::abs(lo - expect), std::abs(hi - expect));
    ok = ok && hi - lo < kTolSpread && dev < kTolSpread;
    detail += (detail.empty() ? "" : "; ") + std::string("F = ") + std::to_string(lo) + " spread " + fmt(hi - lo);
  }
  return {ok, detail};
}

Outcome criterion8() {
  const double tau_c = 3 * pi / 20;
  const auto tp = transition_thetas(10.0, 1.0, tau_c);
  const BellDiagonalParams presets[2] = {{1, -1, 1}, {-0.5, 0.4, 0.8}};
  const auto thetas = GridRange{tp.theta1, pi / 4, 25}.points();
  std::vector<double> n, f1, f2;
  for (double th : thetas) {
    const DephasingSpec s = dephasing(th);
    n.push_back(analytic_blp_dephasing(s, tau_c));
    const auto kappa = kappa_complex(s, tau_c);
    f1.push_back(rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal(presets[0]), kappa))));
    f2.push_back(rsp_fidelity(correlation_matrix(apply_dephasing(bell_diagonal(presets[1]), kappa))));
  }
  bool ok = true, strict = false;
  for (std::size_t k = 0; k + 1 < thetas.size(); ++k) {
    ok = ok && n[k + 1] >= n[k] && f1[k + 1] <= f1[k] && f2[k + 1] <= f2[k];
    strict = strict || f1[k + 1] < f1[k] || f2[k + 1] < f2[k];
  }
  return {ok && strict, "N " + fmt(n.front()) + " -> " + fmt(n.back()) + ", F1 " + fmt(f1.front()) + " -> " +
                            fmt(f1.back()) + ", F2 " + fmt(f2.front()) + " -> " + fmt(f2.back())};
}

Outcome criterion9() {
  SearchOptions opt;
  opt.n_pairs = 0;
  opt.grid_size = 4001;
  double worst = 0.0;
  for (double ratio : {0.1, 0.5, 1.0}) {
    const LorentzSpec ls{1.0, ratio};
    const double expect = std::exp(-pi * ls.Gamma / ls.epsilon());
    const double numeric = blp_search(ChannelFamily{ls}, {0.0, 2 * pi / ls.epsilon()}, opt).value;
    worst = std::max(worst, std::abs(numeric - expect));
  }
  ExperimentConfig c;
  c.figure = Figure::fig5;
  const CsvTable t = run_fig5(c);
  bool mono = t.rows.size() == 20;
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
    for (int col = 1; col < 4; ++col) mono = mono && t.rows[k + 1][col] < t.rows[k][col];
  }
  return {worst <= kTolLorentz && mono,
          "max |BLP - exp(-pi Gamma/eps)| " + fmt(worst) + (mono ? ", fig5 decreasing" : ", fig5 not monotone")};
}

Outcome criterion10() {
  double worst_q = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 25; ++j) {
      const DephasingSpec s = dephasing(pi / 2 * i / 19);
      const double tau = 2 * pi / 10 * j / 24;
      worst_q = std::max(worst_q, std::abs(kappa_quadrature(s, tau) - kappa_complex(s, tau)));
    }
  }
  double worst_d = 0.0;
  for (double ratio : {0.1, 0.5, 1.0, 1.7}) {
    const LorentzSpec ls{1.0, ratio};
    const double eps = ls.epsilon(), g = ls.Gamma;
    for (double t = 0.05; t < 2.5 * lorentz_revival_time(ls); t += 0.37) {
      const double h = 1e-5;
      const double numeric = (chi(ls, t + h) - chi(ls, t - h)) / (2 * h);
      const double exact = -std::exp(-g * t / 2) * (g * g + eps * eps) / (2 * eps) * std::sin(eps * t / 2);
      worst_d = std::max(worst_d, std::abs(numeric - exact));
    }
  }
  return {worst_q <= kTolQuadrature && worst_d <= kTolDerivative,
          "quadrature " + fmt(worst_q) + " over 500 points, chi' " + fmt(worst_d)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion11(const std::string& cli) {
  std::string runs[2];
  const unsigned threads[2] = {1, 8};
  const auto dir = std::filesystem::temp_directory_path() / "nmrsp_acceptance";
  std::filesystem::create_directories(dir);
  for (int k = 0; k < 2; ++k) {
    if (cli.empty()) {
      ExperimentConfig c = fig1_defaults();
      c.threads = threads[k];
      runs[k] = run_fig1(c).to_csv();
    } else {
      const auto out = dir / ("fig1_t" + std::to_string(threads[k]) + ".csv");
      const std::string cmd = "\"" + cli + "\" fig1 --seed 42 --threads " + std::to_string(threads[k]) + " --out \"" +
                              out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
      runs[k] = slurp(out);
    }
  }
  std::filesystem::remove_all(dir);
  const bool same = !runs[0].empty() && runs[0] == runs[1];
  return {same, std::to_string(runs[0].size()) + " bytes" + (same ? ", identical" : ", differ") +
                    (cli.empty() ? " (library)" : " (cli)")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  std::string cli;
  app.add_option("--criterion", selected, "criterion number (repeatable; default all)")->check(CLI::Range(1, 11));
  app.add_option("--cli", cli, "path to the nmrsp executable for the determinism check");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int k = 1; k <= 11; ++k) selected.push_back(k);
  }

  const std::map<int, std::function<Outcome()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
      {11, [&] { return criterion11(cli); }},
  };

  int failed = 0;
  for (int k : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria.at(k)();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s  [%.1f s]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

#include "nmrsp/measures.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nmrsp/parallel.hpp"

namespace nmrsp {

using std::numbers::pi;

namespace {

constexpr double kFlatIncrement = 1e-14;  // increments below this never trigger refinement
constexpr double kZeroTol = 1e-10;        // |f| treated as an exact zero of the decoherence function
constexpr double kPositiveH = 1e-14;      // h * eps above this counts as backflow

struct Extremum {
  double t;
  double value;
};

// Golden-section search for a minimum (or maximum) of a unimodal function on [a, b].
template <class F>
Extremum golden_extremum(const F& f, double a, double b, bool maximize) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [&](double t) { return maximize ? -f(t) : f(t); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c);
  double fd = g(d);
  for (int it = 0; it < 200; ++it) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (b - a <= 4.0 * DBL_EPSILON * scale || !(c < d)) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
  }
  const bool take_c = fc < fd;
  const double t = take_c ? c : d;
  const double v = take_c ? fc : fd;
  return {t, maximize ? -v : v};
}

// Linear channel action on a 4x4 operator with qubit a first.
Eigen::Matrix4cd evolve4(ChannelKind kind, const Eigen::Matrix4cd& m, cdouble value) {
  Eigen::Matrix4cd out = m;
  if (kind == ChannelKind::dephasing) {
    out.topRightCorner<2, 2>() *= value;
    out.bottomLeftCorner<2, 2>() *= std::conj(value);
  } else {
    const double c = value.real();
    out.topLeftCorner<2, 2>() += (1.0 - c * c) * m.bottomRightCorner<2, 2>();
    out.topRightCorner<2, 2>() *= c;
    out.bottomLeftCorner<2, 2>() *= c;
    out.bottomRightCorner<2, 2>() *= c * c;
  }
  return out;
}

StatePair candidate_pair(std::size_t i, std::size_t n_optimal, const SearchOptions& options) {
  if (i >= n_optimal) return sample_random_pair(options.seed, i - n_optimal);
  const std::size_t phases = options.phase_count;
  const std::size_t alphas = options.alpha_count;
  const std::size_t variant = i / (alphas * phases);
  const std::size_t rest = i % (alphas * phases);
  const double alpha = alphas == 1 ? 1.0 : static_cast<double>(rest / phases) / static_cast<double>(alphas - 1);
  const double phase = 2.0 * pi * static_cast<double>(rest % phases) / static_cast<double>(phases);
  return optimal_pairs(alpha, phase, variant == 0 ? PairVariant::zeta : PairVariant::eta);
}

std::vector<std::vector<double>> evaluate_candidates(const ChannelFamily& family, std::span<const double> grid,
                                                     std::span<const double> ends, const SearchOptions& options,
                                                     std::size_t n_optimal) {
  std::vector<std::vector<double>> results(n_optimal + options.n_pairs);
  parallel_for(results.size(), options.threads, [&](std::size_t i) {
    const StatePair pair = candidate_pair(i, n_optimal, options);
    results[i] = blp_prefix(trace_distance_trajectory(family, pair, grid), ends);
  });
  return results;
}

void validate_search(const SearchOptions& options) {
  if (options.grid_size < 2) throw InvalidInput("blp search: grid_size must be at least 2");
  if (options.alpha_count < 1 || options.phase_count < 1) {
    throw InvalidInput("blp search: optimal-pair grid must have at least one point per axis");
  }
}

void validate_window(TimeWindow w, const char* who) {
  if (!std::isfinite(w.begin) || !std::isfinite(w.end) || w.begin < 0.0 || !(w.end > w.begin)) {
    std::ostringstream os;
    os << who << ": invalid window [" << w.begin << ", " << w.end << "]";
    throw InvalidInput(os.str());
  }
}

double uniform_normal_pair_component(std::mt19937_64& engine, double& spare, bool& has_spare) {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = static_cast<double>((engine() >> 11) + 1) * scale;
  const double u2 = static_cast<double>((engine() >> 11) + 1) * scale;
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare = r * std::sin(2.0 * pi * u2);
  has_spare = true;
  return r * std::cos(2.0 * pi * u2);
}

PureState haar_state(std::mt19937_64& engine) {
  double spare = 0.0;
  bool has_spare = false;
  ComplexVector v(4);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double re = uniform_normal_pair_component(engine, spare, has_spare);
    const double im = uniform_normal_pair_component(engine, spare, has_spare);
    v(k) = {re, im};
  }
  return PureState::normalized(std::move(v));
}

}  // namespace

void Trajectory::validate() const {
  if (times.size() < 2 || times.size() != values.size()) {
    throw InvalidInput("Trajectory: need at least two samples and matching lengths");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || !std::isfinite(values[k])) throw InvalidInput("Trajectory: non-finite sample");
    if (k > 0 && !(times[k] > times[k - 1])) throw InvalidInput("Trajectory: times must be strictly increasing");
  }
}

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::blp: return "blp";
    case MeasureKind::divisibility: return "divisibility";
    case MeasureKind::entanglement: return "entanglement";
    case MeasureKind::mutual_info: return "mutual-info";
  }
  return "unknown";
}

bool MeasureReport::infinite() const noexcept { return std::isinf(value); }

std::vector<double> uniform_grid(TimeWindow window, std::size_t n) {
  if (n < 2) throw InvalidInput("uniform_grid: need at least two points");
  if (!std::isfinite(window.begin) || !std::isfinite(window.end) || !(window.end > window.begin)) {
    throw InvalidInput("uniform_grid: invalid window");
  }
  std::vector<double> grid(n);
  const double span = window.end - window.begin;
  for (std::size_t k = 0; k < n; ++k) {
    grid[k] = window.begin + span * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  grid.back() = window.end;
  return grid;
}

std::vector<double> merge_nodes(std::vector<double> grid, std::span<const double> extra) {
  double scale = 0.0;
  for (double t : grid) scale = std::max(scale, std::abs(t));
  for (double t : extra) scale = std::max(scale, std::abs(t));
  const double snap = 1e-12 * std::max(scale, 1.0);
  for (double t : extra) {
    auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it != grid.end() && std::abs(*it - t) <= snap) {
      *it = t;
    } else if (it != grid.begin() && std::abs(*std::prev(it) - t) <= snap) {
      *std::prev(it) = t;
    } else {
      grid.insert(it, t);
    }
  }
  return grid;
}

Trajectory sample_trajectory(const std::function<double(double)>& f, std::span<const double> grid, bool refine) {
  Trajectory base;
  base.times.assign(grid.begin(), grid.end());
  base.values.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) base.values[k] = f(grid[k]);
  base.validate();
  if (!refine || grid.size() < 3) return base;

  std::vector<Extremum> extra;
  const auto& t = base.times;
  const auto& v = base.values;
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    const double d1 = v[k] - v[k - 1];
    const double d2 = v[k + 1] - v[k];
    if (std::max(std::abs(d1), std::abs(d2)) < kFlatIncrement) continue;
    const bool is_min = d1 < 0.0 && d2 > 0.0;
    const bool is_max = d1 > 0.0 && d2 < 0.0;
    if (!is_min && !is_max) continue;
    const Extremum e = golden_extremum(f, t[k - 1], t[k + 1], is_max);
    const bool better = is_max ? e.value > v[k] : e.value < v[k];
    if (better && e.t > t[k - 1] && e.t < t[k + 1] && e.t != t[k]) extra.push_back(e);
  }
  if (extra.empty()) return base;

  Trajectory out;
  out.times.reserve(t.size() + extra.size());
  out.values.reserve(t.size() + extra.size());
  std::sort(extra.begin(), extra.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
  std::size_t j = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    while (j < extra.size() && extra[j].t < t[k]) {
      if (out.times.empty() || extra[j].t > out.times.back()) {
        out.times.push_back(extra[j].t);
        out.values.push_back(extra[j].value);
      }
      ++j;
    }
    if (out.times.empty() || t[k] > out.times.back()) {
      out.times.push_back(t[k]);
      out.values.push_back(v[k]);
    }
  }
  return out;
}

double blp_integral(const Trajectory& traj) {
  traj.validate();
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) sum += std::max(0.0, traj.values[k + 1] - traj.values[k]);
  return sum;
}

std::vector<double> blp_prefix(const Trajectory& traj, std::span<const double> ends) {
  traj.validate();
  std::vector<double> cumulative(traj.size(), 0.0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    cumulative[k] = cumulative[k - 1] + std::max(0.0, traj.values[k] - traj.values[k - 1]);
  }
  std::vector<double> out;
  out.reserve(ends.size());
  for (double e : ends) {
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), e);
    if (it == traj.times.end() || *it != e) {
      std::ostringstream os;
      os << "blp_prefix: window end " << e << " is not a trajectory node";
      throw InvalidInput(os.str());
    }
    out.push_back(cumulative[static_cast<std::size_t>(it - traj.times.begin())]);
  }
  return out;
}

std::vector<Interval> increase_intervals(const Trajectory& traj, double min_step) {
  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    if (traj.values[k + 1] - traj.values[k] > min_step) {
      if (!out.empty() && out.back().end == traj.times[k]) {
        out.back().end = traj.times[k + 1];
      } else {
        out.push_back({traj.times[k], traj.times[k + 1]});
      }
    }
  }
  return out;
}

StatePair optimal_pairs(double alpha, double phase, PairVariant variant) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("optimal_pairs: alpha must lie in [0, 1]");
  if (!(phase >= 0.0 && phase <= 2.0 * pi)) throw InvalidInput("optimal_pairs: phase must lie in [0, 2 pi]");
  const double r = 1.0 / std::sqrt(2.0);
  const cdouble e = std::polar(1.0, phase);
  // Basis order |HH>, |HV>, |VH>, |VV>.
  auto phi = [&](double sign) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = r;
    v(3) = sign * e * r;
    return v;
  };
  auto phi_prime = [&](double sign) {
    ComplexVector v = ComplexVector::Zero(4);
    v(1) = r;
    v(2) = sign * e * r;
    return v;
  };
  const double a = std::sqrt(alpha);
  const double b = std::sqrt(1.0 - alpha);
  const double s = variant == PairVariant::zeta ? 1.0 : -1.0;
  const ComplexVector plus = a * phi(+1.0) + b * phi_prime(+s);
  const ComplexVector minus = a * phi(-1.0) + b * phi_prime(-s);
  return {DensityMatrix::from_pure(PureState::normalized(plus)),
          DensityMatrix::from_pure(PureState::normalized(minus))};
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t pair_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ index);
}

StatePair sample_random_pair(std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 engine(pair_stream_seed(seed, index));
  const PureState a = haar_state(engine);
  const PureState b = haar_state(engine);
  return {DensityMatrix::from_pure(a), DensityMatrix::from_pure(b)};
}

Trajectory trace_distance_trajectory(const ChannelFamily& family, const StatePair& pair,
                                     std::span<const double> grid, bool refine) {
  if (pair.rho1.dim() != 4 || pair.rho2.dim() != 4) {
    throw InvalidInput("trace_distance_trajectory: expected a pair of two-qubit states");
  }
  const Eigen::Matrix4cd diff = pair.rho1.matrix() - pair.rho2.matrix();
  const ChannelKind kind = kind_of(family);
  auto distance = [&](double t) {
    return 0.5 * trace_norm_unchecked(evolve4(kind, diff, decoherence_value(family, t)));
  };
  return sample_trajectory(distance, grid, refine);
}

BlpSweep blp_sweep(const ChannelFamily& family, double t0, std::span<const double> window_ends,
                   const SearchOptions& options) {
  validate_search(options);
  if (window_ends.empty()) throw InvalidInput("blp_sweep: no window ends");
  double t_max = t0;
  for (double e : window_ends) {
    validate_window({t0, e}, "blp_sweep");
    t_max = std::max(t_max, e);
  }
  const auto grid = merge_nodes(uniform_grid({t0, t_max}, options.grid_size), window_ends);
  const std::size_t n_optimal = 2 * options.alpha_count * options.phase_count;
  const auto results = evaluate_candidates(family, grid, window_ends, options, n_optimal);

  BlpSweep sweep;
  sweep.window_ends.assign(window_ends.begin(), window_ends.end());
  const std::size_t n_ends = window_ends.size();
  sweep.optimal.assign(n_ends, 0.0);
  sweep.random_max.assign(n_ends, 0.0);
  sweep.random_argmax.assign(n_ends, -1);
  for (std::size_t e = 0; e < n_ends; ++e) {
    for (std::size_t i = 0; i < n_optimal; ++i) sweep.optimal[e] = std::max(sweep.optimal[e], results[i][e]);
    for (std::size_t i = n_optimal; i < results.size(); ++i) {
      const auto idx = static_cast<std::int64_t>(i - n_optimal);
      if (sweep.random_argmax[e] < 0 || results[i][e] > sweep.random_max[e]) {
        sweep.random_max[e] = results[i][e];
        sweep.random_argmax[e] = idx;
      }
    }
  }
  return sweep;
}

MeasureReport blp_search(const ChannelFamily& family, TimeWindow window, const SearchOptions& options) {
  validate_search(options);
  validate_window(window, "blp_search");
  const auto grid = uniform_grid(window, options.grid_size);
  const std::array<double, 1> ends{window.end};
  const std::size_t n_optimal = 2 * options.alpha_count * options.phase_count;
  const auto results = evaluate_candidates(family, grid, ends, options, n_optimal);

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i][0] > results[best][0]) best = i;
  }
  StatePair witness = candidate_pair(best, n_optimal, options);
  MeasureReport report;
  report.kind = MeasureKind::blp;
  report.value = results[best][0];
  report.grid_size = options.grid_size;
  report.backflow = increase_intervals(trace_distance_trajectory(family, witness, grid));
  report.witness = std::move(witness);
  return report;
}

MeasureReport divisibility_choi_path(const ChannelFamily& family, TimeWindow window, std::size_t grid_size) {
  validate_window(window, "divisibility_choi_path");
  const auto grid = uniform_grid(window, grid_size);
  MeasureReport report;
  report.kind = MeasureKind::divisibility;
  report.grid_size = grid_size;
  const bool real_valued = kind_of(family) == ChannelKind::amplitude_damping;

  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double eps = grid[k + 1] - grid[k];
    if (real_valued) {
      const double f0 = decoherence_value(family, grid[k]).real();
      const double f1 = decoherence_value(family, grid[k + 1]).real();
      if (f0 * f1 < 0.0) {
        report.value = std::numeric_limits<double>::infinity();
        report.singular_time = grid[k] - f0 * eps / (f1 - f0);
        return report;
      }
    }
    ComplexMatrix choi;
    try {
      choi = intermediate_choi(family, grid[k], eps);
    } catch (const SingularIntermediateMap& e) {
      // Only a divergence if the function grows out of the zero.
      if (std::abs(decoherence_value(family, grid[k + 1])) > 0.0) {
        report.value = std::numeric_limits<double>::infinity();
        report.singular_time = e.time();
        return report;
      }
      continue;
    }
    const double excess = trace_norm(choi) - 1.0;  // h(t_k) * eps
    if (excess > kPositiveH) {
      sum += excess;
      if (!report.backflow.empty() && report.backflow.back().end == grid[k]) {
        report.backflow.back().end = grid[k + 1];
      } else {
        report.backflow.push_back({grid[k], grid[k + 1]});
      }
    }
  }
  report.value = sum;
  return report;
}

MeasureReport divisibility_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size) {
  validate_window(window, "divisibility_measure");
  const auto grid = uniform_grid(window, grid_size);
  const Trajectory traj =
      sample_trajectory([&](double t) { return std::abs(decoherence_value(family, t)); }, grid, true);

  MeasureReport report;
  report.kind = MeasureKind::divisibility;
  report.grid_size = grid_size;
  report.backflow = increase_intervals(traj);
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    if (traj.values[k] <= kZeroTol && traj.values[k + 1] > traj.values[k]) {
      report.value = std::numeric_limits<double>::infinity();
      report.singular_time = traj.times[k];
      return report;
    }
  }

  // h integrates to ln r per cell for dephasing and to ln r^2 for damping
  double weight = 1.0;
  if (kind_of(family) == ChannelKind::amplitude_damping) {
    weight = 2.0;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      const double f0 = decoherence_value(family, traj.times[k]).real();
      const double f1 = decoherence_value(family, traj.times[k + 1]).real();
      if (f0 * f1 < 0.0) {
        report.value = std::numeric_limits<double>::infinity();
        report.singular_time = traj.times[k] - f0 * (traj.times[k + 1] - traj.times[k]) / (f1 - f0);
        return report;
      }
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    if (traj.values[k + 1] > traj.values[k]) sum += weight * std::log(traj.values[k + 1] / traj.values[k]);
  }
  report.value = sum;
  return report;
}

Trajectory negativity_trajectory(const ChannelFamily& family, std::span<const double> grid, bool refine) {
  return sample_trajectory(
      [&](double t) { return negativity(choi_state(family, t, 4).state, Bipartition{4, 4}); }, grid, refine);
}

double mutual_information(const ChoiState& choi) {
  const std::array<Eigen::Index, 2> dims{choi.system_dim, choi.system_dim};
  const std::array<Eigen::Index, 1> system{0};
  const std::array<Eigen::Index, 1> ancilla{1};
  const double s_sys = von_neumann_entropy(partial_trace(choi.state, dims, system));
  const double s_anc = von_neumann_entropy(partial_trace(choi.state, dims, ancilla));
  return s_sys + s_anc - von_neumann_entropy(choi.state);
}

Trajectory mutual_info_trajectory(const ChannelFamily& family, std::span<const double> grid, bool refine) {
  return sample_trajectory([&](double t) { return mutual_information(choi_state(family, t, 4)); }, grid, refine);
}

MeasureReport entanglement_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size) {
  validate_window(window, "entanglement_measure");
  const Trajectory traj = negativity_trajectory(family, uniform_grid(window, grid_size));
  MeasureReport report;
  report.kind = MeasureKind::entanglement;
  report.value = blp_integral(traj);
  report.grid_size = grid_size;
  report.backflow = increase_intervals(traj);
  return report;
}

MeasureReport mutual_info_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size) {
  validate_window(window, "mutual_info_measure");
  const Trajectory traj = mutual_info_trajectory(family, uniform_grid(window, grid_size));
  MeasureReport report;
  report.kind = MeasureKind::mutual_info;
  report.value = blp_integral(traj);
  report.grid_size = grid_size;
  report.backflow = increase_intervals(traj);
  return report;
}

}  // namespace nmrsp

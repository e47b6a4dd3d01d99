#pragma once

// Non-Markovianity measures evaluated on sampled trajectories.
//
// Trajectories are sampled on a uniform grid and then refined: every interior
// grid extremum is located by golden-section search inside its two neighbouring
// cells and the extremum is inserted as an extra node. The sum of positive
// increments of such a trajectory equals the total variation of increase of the
// underlying function as long as the grid resolves its monotone segments.
//
// Random state pairs: pair `i` of base seed `s` is drawn from a
// std::mt19937_64 engine seeded with splitmix64(splitmix64(s) ^ i). Each state
// is four complex amplitudes (re, im) built from standard normals, then
// normalized. Normals come in Box-Muller pairs: two engine outputs give
// u1, u2 = ((x >> 11) + 1) 2^-53 and the normals sqrt(-2 ln u1) cos(2 pi u2),
// then sqrt(-2 ln u1) sin(2 pi u2). The first state of the pair is drawn
// before the second.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nmrsp/channels.hpp"
#include "nmrsp/linalg.hpp"

namespace nmrsp {

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return times.size(); }
  /// Throws InvalidInput: fewer than two samples, non-increasing times, non-finite values.
  void validate() const;
};

struct Interval {
  double begin;
  double end;
};

struct StatePair {
  DensityMatrix rho1;
  DensityMatrix rho2;
};

enum class PairVariant { zeta, eta };

enum class MeasureKind { blp, divisibility, entanglement, mutual_info };

std::string_view to_string(MeasureKind kind) noexcept;

struct MeasureReport {
  MeasureKind kind = MeasureKind::blp;
  double value = 0.0;  ///< +infinity for a divergent divisibility measure
  std::size_t grid_size = 0;
  std::optional<StatePair> witness;     ///< blp search only
  std::optional<double> singular_time;  ///< where a divergent measure blows up
  std::vector<Interval> backflow;       ///< intervals on which the witnessed quantity increases

  bool infinite() const noexcept;
};

/// n >= 2 equally spaced points, endpoints exact.
std::vector<double> uniform_grid(TimeWindow window, std::size_t n);

/// Sorted union of `grid` and `extra`; values closer than 1e-12 (relative) to
/// an existing node are snapped onto the extra value.
std::vector<double> merge_nodes(std::vector<double> grid, std::span<const double> extra);

/// Samples `f` on the grid; refines interior extrema when `refine` is set.
Trajectory sample_trajectory(const std::function<double(double)>& f, std::span<const double> grid,
                             bool refine = true);

/// Sum of positive increments.
double blp_integral(const Trajectory& traj);

/// Sum of positive increments from the start up to each time in `ends`, which
/// must be nodes of the trajectory.
std::vector<double> blp_prefix(const Trajectory& traj, std::span<const double> ends);

/// Maximal runs of consecutive increasing cells.
std::vector<Interval> increase_intervals(const Trajectory& traj, double min_step = 0.0);

/// (|zeta+><zeta+|, |zeta-><zeta-|) or the eta pair for alpha in [0,1], phase in [0, 2 pi].
StatePair optimal_pairs(double alpha, double phase, PairVariant variant);

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t pair_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Two independent Haar-random two-qubit pure states (see header comment).
StatePair sample_random_pair(std::uint64_t seed, std::uint64_t index);

/// D(Lambda_t rho1, Lambda_t rho2) sampled on `grid`; two-qubit pairs only.
Trajectory trace_distance_trajectory(const ChannelFamily& family, const StatePair& pair,
                                     std::span<const double> grid, bool refine = true);

struct SearchOptions {
  std::size_t n_pairs = 0;
  std::size_t grid_size = 4001;
  std::uint64_t seed = 42;
  std::size_t alpha_count = 11;  ///< alpha_i = i / (count - 1)
  std::size_t phase_count = 16;  ///< phase_j = 2 pi j / count
  unsigned threads = 0;
};

/// Per-window maxima of the information-flow integral over [t0, end_k].
struct BlpSweep {
  std::vector<double> window_ends;
  std::vector<double> optimal;     ///< max over the built-in optimal pairs
  std::vector<double> random_max;  ///< max over the random pairs (0 if none)
  std::vector<std::int64_t> random_argmax;  ///< -1 if no random pairs
};

/// One refined trajectory per candidate over [t0, max end] (uniform grid of
/// `grid_size` points plus every window end as a node); each window's value is
/// the prefix sum at its end. Deterministic for any thread count.
BlpSweep blp_sweep(const ChannelFamily& family, double t0, std::span<const double> window_ends,
                   const SearchOptions& options);

/// Maximum of the information-flow integral over the optimal-pair grid and
/// `n_pairs` random pairs. Ties go to the lower candidate index (optimal pairs
/// come first).
MeasureReport blp_search(const ChannelFamily& family, TimeWindow window, const SearchOptions& options);

/// Divisibility measure. A vanishing decoherence function at the start of an
/// increase makes the measure infinite (value = +inf, singular_time set).
/// Otherwise: dephasing uses the exact sum of ln|kappa| increments; the
/// Lorentzian family uses the intermediate-Choi route.
MeasureReport divisibility_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size);

/// Grid integral of h(t) = (||Choi(Lambda_{t+eps,t})||_1 - 1) / eps with eps the
/// grid step (forward difference). Backflow intervals are the cells with h > 0.
MeasureReport divisibility_choi_path(const ChannelFamily& family, TimeWindow window, std::size_t grid_size);

/// Negativity across s:s' of the d = 4 Choi state.
Trajectory negativity_trajectory(const ChannelFamily& family, std::span<const double> grid, bool refine = true);

/// S(rho_s) + S(rho_s') - S(rho_ss') of a Choi state, in bits.
double mutual_information(const ChoiState& choi);

Trajectory mutual_info_trajectory(const ChannelFamily& family, std::span<const double> grid, bool refine = true);

MeasureReport entanglement_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size);
MeasureReport mutual_info_measure(const ChannelFamily& family, TimeWindow window, std::size_t grid_size);

}  // namespace nmrsp

#pragma once

// Figure runners. Each runner turns an ExperimentConfig into a CsvTable whose
// row order is fixed by the grid order, so serial and threaded runs emit the
// same bytes.
//
// Config files are JSON documents; see README.md for the schema. Every field is
// optional and falls back to the figure defaults.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmrsp/decoherence.hpp"
#include "nmrsp/rsp.hpp"

namespace nmrsp {

enum class Figure { fig1, fig2, fig3a, fig3b, fig4, fig5 };

std::string_view to_string(Figure figure) noexcept;
std::optional<Figure> parse_figure(std::string_view name) noexcept;

/// `count` equally spaced points from `min` to `max`, both included.
struct GridRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  std::vector<double> points() const;
};

struct ExperimentConfig {
  Figure figure = Figure::fig1;
  DephasingSpec dephasing{0.78539816339744828, 0.0, 10.0, 1.0};
  LorentzSpec lorentz{1.0, 0.1};

  // Unset ranges resolve to the figure defaults (which depend on the specs).
  std::optional<GridRange> tau_c;  ///< fig1, fig2: control times (reduced)
  std::optional<GridRange> theta;  ///< fig2, fig3a, fig3b
  std::optional<GridRange> t_c;    ///< fig4: control times
  std::optional<GridRange> ratio;  ///< fig5: Gamma / gamma0

  std::array<BellDiagonalParams, 2> bell{{{1.0, -1.0, 1.0}, {-0.5, 0.4, 0.8}}};

  std::size_t n_pairs = 10000;
  std::size_t grid_size = 4001;
  std::uint64_t seed = 42;
  std::size_t alpha_count = 11;
  std::size_t phase_count = 16;
  unsigned threads = 0;

  std::string output;  ///< empty: CSV to stdout, no metadata file
};

/// Defaults for one figure with every range resolved.
ExperimentConfig default_config(Figure figure);

/// Fills unset ranges from the figure defaults and checks every invariant.
ExperimentConfig resolve(const ExperimentConfig& config);

/// Overrides the fields present in a JSON document. Unknown keys are rejected.
void apply_config_json(ExperimentConfig& config, std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path, Figure figure);

/// Canonical JSON rendering of a resolved config.
std::string config_json(const ExperimentConfig& config);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws InvalidInput unless rectangular with finite values.
  void validate() const;
  /// Comma separated, 17 significant digits, LF line endings, header first.
  std::string to_csv() const;
};

/// 17-significant-digit rendering in the classic locale.
std::string format_number(double x);

CsvTable run_fig1(const ExperimentConfig& config);
CsvTable run_fig2(const ExperimentConfig& config);
CsvTable run_fig3(const ExperimentConfig& config);
CsvTable run_fig4(const ExperimentConfig& config);
CsvTable run_fig5(const ExperimentConfig& config);

/// Dispatches on config.figure.
CsvTable run_figure(const ExperimentConfig& config);

/// Writes the CSV to config.output and the metadata (config, seed, version) to
/// config.output + ".meta.json".
void write_outputs(const ExperimentConfig& config, const CsvTable& table);

std::string_view library_version() noexcept;

}  // namespace nmrsp

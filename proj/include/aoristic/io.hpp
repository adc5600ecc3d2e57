#ifndef AORISTIC_IO_HPP
#define AORISTIC_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aoristic/posterior.hpp"

namespace aoristic {

/// Full precision (round-trip safe) decimal rendering of a double.
std::string format_double(double v);

/// A data file is CSV lines "a,l" (optionally with a header line and
/// '#'-comment lines) or a JSON array of {"a": ..., "l": ...}. Rows with
/// l = 0 are atoms, rows with l > 0 intervals. A negative l is a parse
/// error. When no window is supplied the tight hull of the records padded
/// by 1% is used.
ObservedData ingest(const std::string& path, std::optional<Window> window);
ObservedData ingest_stream(std::istream& in, std::optional<Window> window,
                           const std::string& origin);

/// Writers; `meta` (seed, config echo) is embedded as '#' comment lines.
void write_records_csv(const std::string& path,
                       const std::vector<double>& atoms,
                       const std::vector<IntervalCensored>& intervals,
                       const nlohmann::json& meta);
void write_truth_csv(const std::string& path, const std::vector<double>& times,
                     const nlohmann::json& meta);
void write_chain_csv(const std::string& path, const PosteriorSample& sample,
                     const nlohmann::json& meta);
void write_histogram_csv(const std::string& path, const ObservedData& data,
                         const PosteriorSample& sample, int bins,
                         const nlohmann::json& meta);
void write_json(const std::string& path, const nlohmann::json& value);

/// Run-wide configuration shared by the CLI subcommands. Flags mirror the
/// field names; a config file (JSON or key=value lines) supplies defaults
/// that explicit flags override.
struct RunConfig {
  // model
  double beta = 12.0;
  double eta = 0.0;
  double r = 0.05;
  double window_lo = 0.0;
  double window_hi = 1.0;
  double shape = 2.5;       // k of the Y-phase Gamma law
  double rate = 0.07;       // lambda
  bool rate_is_scale = false;  // interpret `rate` as a scale parameter
  double atom_prob = 0.2;   // p
  // mcmc
  std::uint64_t burnin = 10000;
  std::uint64_t sweeps = 100000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  // execution
  int threads = 1;
  std::string sampler = "cftp";  // cftp | bdmh
  int prior_sweeps = 2000;       // bdmh sweeps when sampler = bdmh

  Window window() const { return Window{window_lo, window_hi}; }
  nlohmann::json to_json() const;
  void apply_json(const nlohmann::json& j);        // throws ConfigError
  void apply_file(const std::string& path);        // JSON or key=value
  /// Ensures a seed is present, drawing one from the system if needed.
  void ensure_seed();
};

}  // namespace aoristic

#endif

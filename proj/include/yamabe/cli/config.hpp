#pragma once

#include "yamabe/discretization.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/model_geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace yamabe::cli {

/// Malformed or invalid configuration. `line` is 0 when the problem is not
/// tied to a single line (missing key, cross-field invariant).
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// A run description. Optional fields hold the "auto"/"default"/"critical"
/// keywords; resolved values are computed by the commands and echoed in their
/// summaries.
struct RunConfig {
  int n = 0;
  double kappa = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;

  std::vector<double> a{1.0};
  std::vector<double> b{0.0};
  std::vector<double> f{1.0};

  /// One value for a ball, inner then outer for an annulus. Empty means zero data.
  std::vector<double> phi;

  std::optional<double> gamma;                    // auto
  std::optional<double> q;                        // critical
  std::optional<std::vector<double>> q_schedule;  // default
  int mesh_n = 400;
  double tol = 1e-9;
  int max_iter = 20000;
  int restarts = 0;
  std::uint64_t seed = 0;

  std::optional<double> delta;                  // r_max / 4
  std::optional<std::vector<double>> epsilons;  // delta / {10, 20, 40, 80, 160}
  double gap_threshold = 0.02;

  RadialManifold manifold() const;
  CoefficientField coefficients() const;
  /// phi padded with zeros to the boundary count.
  std::vector<double> boundary_values() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses `section.key = value` lines. '#' starts a comment. Unknown or
/// repeated keys, malformed numbers and violated invariants all raise
/// ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: keywords are written back as keywords.
std::string serialize(const RunConfig& cfg);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);
std::string format_list(const std::vector<double>& xs);

}  // namespace yamabe::cli

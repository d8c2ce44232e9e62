#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdgs/coarse.hpp"
#include "mdgs/coeff.hpp"
#include "mdgs/diagnostics.hpp"
#include "mdgs/schwarz.hpp"
#include "mdgs/solver.hpp"

namespace mdgs {

/// Parsed form of a field string such as `binary:1e6` or
/// `lognormal:sigma2[:theta[:seed[:size]]]`.
struct FieldSpec {
  enum class Kind { kConstant, kBinary, kChannelsCrossing, kChannelsTouching, kLognormal, kLognormalContrast, kFile };
  Kind kind = Kind::kConstant;
  double value = 1.0;  // constant value, alpha_hat, or target contrast
  GrfSpec grf;
  std::string path;
  std::string text;  // the original string

  std::string kind_name() const;
};

FieldSpec parse_field_spec(const std::string& text);

/// Builds the field. Inclusion and channel media demand H >= 8h unless
/// `require_resolved` is false. The value reported in the CSV (alpha_hat or
/// the realized contrast) goes to `parameter`.
CoefficientField make_field(const FieldSpec& spec, const FineMesh& fine, const CoarseMesh& coarse,
                            bool require_resolved = true, double* parameter = nullptr);

/// Target contrasts and seed of the log-normal sweep.
inline constexpr double kTable4Contrasts[] = {8.55e3, 1.75e5, 7.32e7, 1.49e9, 6.02e11, 1.28e13};
inline constexpr std::uint64_t kTable4Seed = 1;

struct RunConfig {
  int n = 128;
  int m = 8;
  int overlap = 2;
  double eta = 4.0;
  BasisType basis = BasisType::kMsLinear;
  OscillatoryTrace trace = OscillatoryTrace::kOwnSide;
  SchwarzMethod method = SchwarzMethod::kOverlapping;
  std::string field = "binary:1";
  double tol = 1e-6;
  int max_iters = 2000;
  std::string rhs = "constant";  // or random:<seed>
  bool indicators = true;
  bool require_resolved = true;
};

/// Checks the parameter ranges that do not need a mesh.
void validate(const RunConfig& config);

struct RunResult {
  SolveReport solve;
  std::optional<IndicatorReport> indicators;
  std::string field_kind;
  double field_parameter = 0.0;
  double seconds = 0.0;  // whole run including setup
};

RunResult run_solve(const RunConfig& config);

/// Indicators only, without a solve.
IndicatorReport run_indicators(const RunConfig& config, double* field_parameter = nullptr);

std::string csv_header();
std::string csv_row(const RunConfig& config, const RunResult& result);

/// Named experiment sweeps: table1, table2, table3, table4, properties.
std::vector<RunConfig> suite_configs(const std::string& name);

/// Runs every configuration of the suite in order and streams the CSV.
/// `on_row` sees each finished row (for progress output).
std::vector<RunResult> run_suite(const std::string& name, std::ostream& csv,
                                 const std::function<void(const RunConfig&, const RunResult&)>& on_row = {});

/// Key=value configuration file; keys follow the long CLI option names.
RunConfig read_config_file(const std::string& path, RunConfig base = {});
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace mdgs

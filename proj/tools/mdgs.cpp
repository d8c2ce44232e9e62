// Command-line runner: single solves, indicator reports, table sweeps and
// coefficient-field generation.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "mdgs/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitNumeric = 3;

int exit_code(mdgs::ErrorKind kind) {
  switch (kind) {
    case mdgs::ErrorKind::kPenaltyTooSmall:
    case mdgs::ErrorKind::kOperatorNotSpd:
    case mdgs::ErrorKind::kDegradedEmbedding:
    case mdgs::ErrorKind::kInternal:
      return kExitNumeric;
    default:
      return kExitConfig;
  }
}

// Run options are collected as strings and funnelled through the same
// key=value path as config files, so both spellings behave identically.
struct RunOptions {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value file; command-line options take precedence");
    for (const char* key : {"n", "m", "overlap", "eta", "basis", "method", "field", "tol", "max-iters", "rhs",
                            "trace", "indicators"})
      cmd->add_option(std::string("--") + key, values[key]);
  }

  mdgs::RunConfig build(CLI::App* cmd) const {
    mdgs::RunConfig config;
    if (!config_path.empty()) config = mdgs::read_config_file(config_path, config);
    for (const auto& [key, value] : values)
      if (cmd->count("--" + key) > 0) mdgs::apply_config_value(config, key, value);
    return config;
  }
};

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw mdgs::Error(mdgs::ErrorKind::kIo, "cannot write " + path);
  return *holder;
}

void print_indicators(std::ostream& os, const mdgs::IndicatorReport& r, double parameter) {
  auto line = [&](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    os << key << '=' << buf << '\n';
  };
  line("field_parameter", parameter);
  line("gamma_alpha", r.gamma_alpha);
  line("gamma_one", r.gamma_one);
  line("beta_interior_alpha", r.beta_alpha.interior);
  line("beta_boundary_alpha", r.beta_alpha.boundary);
  line("beta_alpha", r.beta());
  line("beta_one", r.beta_one.interior);
  if (r.pi_alpha) line("pi_alpha", *r.pi_alpha);
  line("maxW", r.max_w);
  line("lambda_nonoverlap", r.lambda.nonoverlap);
  if (r.pi_alpha) line("lambda_overlap", r.lambda.overlap);
}

}  // namespace

int main(int argc, char** argv) {
  mdgs::configure_threads_from_env();
  CLI::App app{"Two-level Schwarz preconditioners for weighted interior-penalty DG"};
  app.require_subcommand(1);

  RunOptions solve_opts, ind_opts;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "run one preconditioned solve and print a CSV row");
  solve_opts.attach(solve);
  solve->add_option("-o,--output", solve_out, "CSV file (default stdout)");

  std::string ind_out;
  double rho = 1.0;
  auto* indicators = app.add_subcommand("indicators", "print robustness indicators and bounds");
  ind_opts.attach(indicators);
  indicators->add_option("--rho", rho, "threshold for the separation check");
  indicators->add_option("-o,--output", ind_out);

  std::string suite_name, suite_out;
  bool quiet = false;
  auto* suite = app.add_subcommand("suite", "run a named sweep");
  suite->add_option("name", suite_name, "table1 | table2 | table3 | table4 | properties")->required();
  suite->add_option("-o,--output", suite_out, "CSV file (default stdout)");
  suite->add_flag("-q,--quiet", quiet, "no progress on stderr");

  std::string gf_type = "constant", gf_out;
  int gf_n = 128, gf_m = 8;
  double gf_value = 1.0, gf_alpha_hat = 1.0, gf_theta = 50.0, gf_sigma2 = 1.0, gf_contrast = 0.0;
  int gf_size = 256;
  std::uint64_t gf_seed = 0;
  auto* genfield = app.add_subcommand("genfield", "write a coefficient field in MDGS-ALPHA v1 format");
  genfield->add_option("--type", gf_type, "constant | binary | channels-crossing | channels-touching | lognormal");
  genfield->add_option("--n", gf_n);
  genfield->add_option("--m", gf_m);
  genfield->add_option("--value", gf_value);
  genfield->add_option("--alpha-hat", gf_alpha_hat);
  genfield->add_option("--size", gf_size);
  genfield->add_option("--theta", gf_theta);
  genfield->add_option("--seed", gf_seed);
  genfield->add_option("--sigma2", gf_sigma2);
  genfield->add_option("--contrast", gf_contrast, "choose the variance for this max/min ratio instead of --sigma2");
  genfield->add_option("-o,--output", gf_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::unique_ptr<std::ofstream> file;
    if (*solve) {
      const auto config = solve_opts.build(solve);
      const auto result = mdgs::run_solve(config);
      auto& os = open_output(solve_out, file);
      os << mdgs::csv_header() << '\n' << mdgs::csv_row(config, result) << '\n';
      if (!result.solve.converged) {
        std::cerr << "mdgs: no convergence after " << result.solve.iterations << " iterations\n";
        return kExitNotConverged;
      }
    } else if (*indicators) {
      const auto config = ind_opts.build(indicators);
      double parameter = 0.0;
      const auto report = mdgs::run_indicators(config, &parameter);
      auto& os = open_output(ind_out, file);
      print_indicators(os, report, parameter);
      const auto fine = mdgs::build_fine_mesh(config.n);
      const auto coarse = mdgs::build_coarse_mesh(fine, config.m);
      const auto field = mdgs::make_field(mdgs::parse_field_spec(config.field), fine, coarse, config.require_resolved);
      int failing = 0;
      for (const auto& k : mdgs::assumption_check(fine, coarse, field, rho)) failing += k.holds() ? 0 : 1;
      os << "assumption_failing_elements=" << failing << '\n';
    } else if (*suite) {
      auto& os = open_output(suite_out, file);
      mdgs::run_suite(suite_name, os, [&](const mdgs::RunConfig& c, const mdgs::RunResult& r) {
        if (!quiet) std::cerr << mdgs::csv_row(c, r) << '\n';
      });
    } else if (*genfield) {
      const auto fine = mdgs::build_fine_mesh(gf_n);
      mdgs::CoefficientField field;
      if (gf_type == "lognormal") {
        mdgs::GrfSpec spec{gf_size, gf_theta, gf_seed, gf_sigma2};
        field = gf_contrast > 0.0 ? mdgs::lognormal_field_with_contrast(fine, spec, gf_contrast)
                                  : mdgs::lognormal_field(fine, spec);
      } else if (gf_type == "constant") {
        field = mdgs::constant_field(fine, gf_value);
      } else {
        const auto coarse = mdgs::build_coarse_mesh(fine, gf_m);
        if (gf_type == "binary")
          field = mdgs::binary_inclusions(fine, coarse, gf_alpha_hat);
        else if (gf_type == "channels-crossing")
          field = mdgs::channel_field(fine, coarse, gf_alpha_hat, mdgs::ChannelLayout::kCrossing);
        else if (gf_type == "channels-touching")
          field = mdgs::channel_field(fine, coarse, gf_alpha_hat, mdgs::ChannelLayout::kTouching);
        else
          throw mdgs::Error(mdgs::ErrorKind::kInvalidConfiguration, "unknown field type '" + gf_type + "'");
      }
      mdgs::write_field(open_output(gf_out, file), field);
    }
  } catch (const mdgs::Error& e) {
    std::cerr << "mdgs: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mdgs: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

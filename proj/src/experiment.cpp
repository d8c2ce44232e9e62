#include "mdgs/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace mdgs {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kInvalidConfiguration, "bad number '" + s + "' for " + what);
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kInvalidConfiguration, "bad integer '" + s + "' for " + what);
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(ErrorKind::kInvalidConfiguration, "bad flag '" + s + "' for " + what);
}

std::string fmt(double v, const char* spec = "%.6g") {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Eigen::VectorXd build_rhs(const RunConfig& config, const FineMesh& fine, const CoefficientField& field) {
  if (config.rhs == "constant") return assemble_rhs(fine, field, config.eta, [](Point) { return 1.0; });
  const auto parts = split(config.rhs, ':');
  if (parts.size() == 2 && parts[0] == "random") {
    std::mt19937_64 rng(static_cast<std::uint64_t>(parse_int(parts[1], "rhs seed")));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd b(fine.num_dofs());
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = uni(rng);
    return b;
  }
  throw Error(ErrorKind::kInvalidConfiguration, "rhs must be 'constant' or 'random:<seed>'");
}

struct Problem {
  FineMesh fine;
  CoarseMesh coarse;
  CoefficientField field;
  double parameter = 0.0;
};

Problem make_problem(const RunConfig& config) {
  validate(config);
  Problem p;
  p.fine = build_fine_mesh(config.n);
  p.coarse = build_coarse_mesh(p.fine, config.m);
  p.field = make_field(parse_field_spec(config.field), p.fine, p.coarse, config.require_resolved, &p.parameter);
  if (p.field.n != config.n) throw Error(ErrorKind::kDimensionMismatch, "field file was written for another n");
  return p;
}

}  // namespace

std::string FieldSpec::kind_name() const {
  switch (kind) {
    case Kind::kConstant: return "constant";
    case Kind::kBinary: return "binary";
    case Kind::kChannelsCrossing: return "channels-crossing";
    case Kind::kChannelsTouching: return "channels-touching";
    case Kind::kLognormal: return "lognormal";
    case Kind::kLognormalContrast: return "lognormal-contrast";
    case Kind::kFile: return "file";
  }
  return "unknown";
}

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec spec;
  spec.text = text;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (kind == "file") {
    if (rest.empty()) throw Error(ErrorKind::kInvalidConfiguration, "file field needs a path");
    spec.kind = FieldSpec::Kind::kFile;
    spec.path = rest;
    return spec;
  }
  const auto args = split(rest, ':');
  if (args.empty() || args[0].empty())
    throw Error(ErrorKind::kInvalidConfiguration, "field '" + text + "' needs a parameter");
  spec.value = parse_double(args[0], "field parameter");
  if (kind == "constant") {
    spec.kind = FieldSpec::Kind::kConstant;
  } else if (kind == "binary") {
    spec.kind = FieldSpec::Kind::kBinary;
  } else if (kind == "channels-crossing") {
    spec.kind = FieldSpec::Kind::kChannelsCrossing;
  } else if (kind == "channels-touching") {
    spec.kind = FieldSpec::Kind::kChannelsTouching;
  } else if (kind == "lognormal" || kind == "lognormal-contrast") {
    spec.kind = kind == "lognormal" ? FieldSpec::Kind::kLognormal : FieldSpec::Kind::kLognormalContrast;
    if (spec.kind == FieldSpec::Kind::kLognormal) spec.grf.sigma2 = spec.value;
    if (args.size() > 1) spec.grf.theta = parse_double(args[1], "theta");
    if (args.size() > 2) spec.grf.seed = static_cast<std::uint64_t>(parse_int(args[2], "seed"));
    if (args.size() > 3) spec.grf.grid_size = static_cast<int>(parse_int(args[3], "grid size"));
    if (args.size() > 4) throw Error(ErrorKind::kInvalidConfiguration, "too many lognormal parameters");
    return spec;
  } else {
    throw Error(ErrorKind::kInvalidConfiguration, "unknown field kind '" + kind + "'");
  }
  if (args.size() != 1) throw Error(ErrorKind::kInvalidConfiguration, "field '" + text + "' takes one parameter");
  return spec;
}

CoefficientField make_field(const FieldSpec& spec, const FineMesh& fine, const CoarseMesh& coarse,
                            bool require_resolved, double* parameter) {
  CoefficientField field;
  double param = spec.value;
  switch (spec.kind) {
    case FieldSpec::Kind::kConstant: field = constant_field(fine, spec.value); break;
    case FieldSpec::Kind::kBinary: field = binary_inclusions(fine, coarse, spec.value, require_resolved); break;
    case FieldSpec::Kind::kChannelsCrossing:
      field = channel_field(fine, coarse, spec.value, ChannelLayout::kCrossing, require_resolved);
      break;
    case FieldSpec::Kind::kChannelsTouching:
      field = channel_field(fine, coarse, spec.value, ChannelLayout::kTouching, require_resolved);
      break;
    case FieldSpec::Kind::kLognormal:
      field = lognormal_field(fine, spec.grf);
      param = field.contrast();
      break;
    case FieldSpec::Kind::kLognormalContrast:
      field = lognormal_field_with_contrast(fine, spec.grf, spec.value);
      param = field.contrast();
      break;
    case FieldSpec::Kind::kFile:
      field = read_field_file(spec.path);
      param = field.contrast();
      break;
  }
  if (parameter) *parameter = param;
  return field;
}

void validate(const RunConfig& c) {
  if (c.n < 1) throw Error(ErrorKind::kInvalidConfiguration, "n must be >= 1");
  if (c.m < 1) throw Error(ErrorKind::kInvalidConfiguration, "m must be >= 1");
  if (c.overlap < 0) throw Error(ErrorKind::kInvalidConfiguration, "overlap must be >= 0");
  if (!(c.eta > 0.0)) throw Error(ErrorKind::kInvalidConfiguration, "eta must be positive");
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw Error(ErrorKind::kInvalidConfiguration, "tol must lie in (0,1)");
  if (c.max_iters < 1) throw Error(ErrorKind::kInvalidConfiguration, "max-iters must be >= 1");
  if (c.method == SchwarzMethod::kNonoverlapping && c.overlap != 0)
    throw Error(ErrorKind::kInvalidConfiguration, "nonoverlapping method needs overlap 0");
  if (c.method == SchwarzMethod::kOverlapping && c.overlap < 1)
    throw Error(ErrorKind::kInvalidConfiguration, "overlapping method needs overlap >= 1");
}

IndicatorReport run_indicators(const RunConfig& config, double* field_parameter) {
  const Problem p = make_problem(config);
  const auto space = build_coarse_space(p.fine, p.coarse, p.field, config.basis, config.trace);
  const auto partition = build_partition(p.fine, p.coarse, config.overlap);
  if (field_parameter) *field_parameter = p.parameter;
  return compute_indicators(p.fine, p.coarse, p.field, space, config.eta,
                            config.overlap > 0 ? &partition : nullptr);
}

RunResult run_solve(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Problem p = make_problem(config);
  RunResult result;
  result.field_kind = parse_field_spec(config.field).kind_name();
  result.field_parameter = p.parameter;

  const auto a = assemble_operator(p.fine, p.field, config.eta);
  const Eigen::VectorXd b = build_rhs(config, p.fine, p.field);
  const auto space = build_coarse_space(p.fine, p.coarse, p.field, config.basis, config.trace);
  const auto partition = build_partition(p.fine, p.coarse, config.overlap);
  const SchwarzPreconditioner precond(a, &space, partition, config.method);
  Eigen::VectorXd x;
  SolveOptions options;
  options.tol = config.tol;
  options.max_iters = config.max_iters;
  result.solve = pcg(a, precond, b, x, options);
  if (config.indicators)
    result.indicators = compute_indicators(p.fine, p.coarse, p.field, space, config.eta,
                                           config.overlap > 0 ? &partition : nullptr);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string csv_header() {
  return "method,basis,n,m,overlap,eta,field,alpha_hat_or_contrast,iters,cond_est,gamma_alpha,gamma_one,"
         "beta_alpha,pi_alpha,maxW,lambda_bound,seconds";
}

std::string csv_row(const RunConfig& c, const RunResult& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const IndicatorReport* ind = r.indicators ? &*r.indicators : nullptr;
  double lambda = nan;
  if (ind) lambda = c.method == SchwarzMethod::kNonoverlapping ? ind->lambda.nonoverlap : ind->lambda.overlap;
  std::ostringstream os;
  os << to_string(c.method) << ',' << to_string(c.basis) << ',' << c.n << ',' << c.m << ',' << c.overlap << ','
     << fmt(c.eta) << ',' << r.field_kind << ',' << fmt(r.field_parameter) << ',' << r.solve.iterations << ','
     << fmt(r.solve.cond_estimate) << ',' << fmt(ind ? ind->gamma_alpha : nan) << ','
     << fmt(ind ? ind->gamma_one : nan) << ',' << fmt(ind ? ind->beta() : nan) << ','
     << fmt(ind && ind->pi_alpha ? *ind->pi_alpha : nan) << ',' << fmt(ind ? ind->max_w : nan) << ','
     << fmt(lambda) << ',' << fmt(r.seconds, "%.3f");
  return os.str();
}

std::vector<RunConfig> suite_configs(const std::string& name) {
  std::vector<RunConfig> rows;
  const double contrasts[] = {1.0, 1e2, 1e4, 1e6};
  auto base = [](SchwarzMethod method, int overlap) {
    RunConfig c;
    c.n = 128;
    c.m = 8;
    c.eta = 4.0;
    c.method = method;
    c.overlap = overlap;
    return c;
  };
  auto fmt_field = [](const std::string& kind, double v) { return kind + ":" + fmt(v, "%g"); };

  if (name == "table1") {
    for (auto [method, overlap] : {std::pair{SchwarzMethod::kNonoverlapping, 0}, {SchwarzMethod::kOverlapping, 2}})
      for (double a : contrasts) {
        auto c = base(method, overlap);
        c.basis = BasisType::kMsLinear;
        c.field = fmt_field("binary", a);
        rows.push_back(c);
      }
  } else if (name == "table2") {
    for (auto [method, overlap] : {std::pair{SchwarzMethod::kNonoverlapping, 0}, {SchwarzMethod::kOverlapping, 2}})
      for (double eta : {5.0, 10.0, 100.0})
        for (double a : contrasts) {
          auto c = base(method, overlap);
          c.eta = eta;
          c.basis = BasisType::kMsLinear;
          c.field = fmt_field("binary", a);
          rows.push_back(c);
        }
  } else if (name == "table3") {
    for (auto [method, overlap] : {std::pair{SchwarzMethod::kNonoverlapping, 0}, {SchwarzMethod::kOverlapping, 4}})
      for (const char* layout : {"channels-crossing", "channels-touching"})
        for (double a : contrasts) {
          auto c = base(method, overlap);
          c.basis = BasisType::kMsOscillatory;
          c.field = fmt_field(layout, a);
          rows.push_back(c);
        }
  } else if (name == "table4") {
    for (auto [method, overlap] : {std::pair{SchwarzMethod::kNonoverlapping, 0}, {SchwarzMethod::kOverlapping, 2}})
      for (double target : kTable4Contrasts) {
        auto c = base(method, overlap);
        c.basis = BasisType::kMsOscillatory;
        c.field = "lognormal-contrast:" + fmt(target, "%.3g") + ":50:" + std::to_string(kTable4Seed) + ":256";
        rows.push_back(c);
      }
  } else if (name == "properties") {
    for (int n : {8, 16})
      for (const char* field : {"constant:1", "binary:1e4", "channels-crossing:1e4"})
        for (auto [method, overlap] : {std::pair{SchwarzMethod::kNonoverlapping, 0}, {SchwarzMethod::kOverlapping, 1}}) {
          RunConfig c;
          c.n = n;
          c.m = 4;
          c.method = method;
          c.overlap = overlap;
          c.field = field;
          c.require_resolved = false;
          rows.push_back(c);
        }
    // H/h sweep; H = 4h cannot host the inclusion or channel geometry.
    for (int m : {8, 16, 32})
      for (const char* field : {"binary:1e6", "channels-touching:1e6"}) {
        RunConfig c;
        c.n = 64;
        c.m = m;
        c.method = SchwarzMethod::kNonoverlapping;
        c.overlap = 0;
        c.basis = BasisType::kMsOscillatory;
        c.field = field;
        rows.push_back(c);
      }
  } else {
    throw Error(ErrorKind::kInvalidConfiguration, "unknown suite '" + name + "'");
  }
  return rows;
}

std::vector<RunResult> run_suite(const std::string& name, std::ostream& csv,
                                 const std::function<void(const RunConfig&, const RunResult&)>& on_row) {
  const auto configs = suite_configs(name);
  std::vector<RunResult> results;
  csv << csv_header() << '\n';
  for (const auto& c : configs) {
    results.push_back(run_solve(c));
    csv << csv_row(c, results.back()) << '\n';
    csv.flush();
    if (on_row) on_row(c, results.back());
  }
  return results;
}

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "n") c.n = static_cast<int>(parse_int(value, key));
  else if (key == "m") c.m = static_cast<int>(parse_int(value, key));
  else if (key == "overlap") c.overlap = static_cast<int>(parse_int(value, key));
  else if (key == "eta") c.eta = parse_double(value, key);
  else if (key == "basis") c.basis = parse_basis_type(value);
  else if (key == "method") c.method = parse_method(value);
  else if (key == "field") c.field = value;
  else if (key == "tol") c.tol = parse_double(value, key);
  else if (key == "max-iters") c.max_iters = static_cast<int>(parse_int(value, key));
  else if (key == "rhs") c.rhs = value;
  else if (key == "indicators") c.indicators = parse_bool(value, key);
  else if (key == "trace") {
    if (value == "own-side") c.trace = OscillatoryTrace::kOwnSide;
    else if (value == "harmonic-mean") c.trace = OscillatoryTrace::kHarmonicMean;
    else throw Error(ErrorKind::kInvalidConfiguration, "trace must be own-side or harmonic-mean");
  } else {
    throw Error(ErrorKind::kInvalidConfiguration, "unknown configuration key '" + key + "'");
  }
}

RunConfig read_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::kInvalidConfiguration, path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

}  // namespace mdgs

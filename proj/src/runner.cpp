#include "boussinesq/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "boussinesq/analyticity.hpp"
#include "boussinesq/dispersion.hpp"
#include "boussinesq/experiments.hpp"
#include "boussinesq/field_io.hpp"
#include "boussinesq/solver.hpp"
#include "csv.hpp"

#ifndef BOUSSINESQ_VERSION
#define BOUSSINESQ_VERSION "unknown"
#endif

namespace boussinesq::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

constexpr std::pair<ExperimentType, std::string_view> kTypeNames[] = {
    {ExperimentType::kDispersion, "dispersion"}, {ExperimentType::kDecay, "decay"},
    {ExperimentType::kStrichartz, "strichartz"}, {ExperimentType::kBilinear, "bilinear"},
    {ExperimentType::kEvolve, "evolve"},         {ExperimentType::kGevreyTrack, "gevrey-track"},
};

enum class Kind { kInteger, kReal, kOptionalReal, kRealList, kText };

struct ParamSpec {
  std::string key;
  Kind kind;
  std::string fallback;
};

std::vector<ParamSpec> schema(ExperimentType type, int dimension) {
  switch (type) {
    case ExperimentType::kDispersion:
      return {{"r_min", Kind::kReal, "1e-3"}, {"r_max", Kind::kReal, "1e3"}, {"samples", Kind::kInteger, "2001"}};
    case ExperimentType::kDecay:
      return {{"kernel", Kind::kText, "localized"},
              {"lambda", Kind::kReal, "16"},
              {"times", Kind::kRealList, dimension == 1 ? "1,2,4,8,16,32,64" : "1,2,4,8,16,32"},
              {"log_points", Kind::kInteger, "512"},
              {"expect_min", Kind::kOptionalReal, "none"},
              {"expect_max", Kind::kOptionalReal, "none"},
              {"scaled_spread_max", Kind::kOptionalReal, "none"}};
    case ExperimentType::kStrichartz:
      return {{"lambdas", Kind::kRealList, "8,16,32,64,128"},
              {"q", Kind::kText, "4"},
              {"r", Kind::kText, dimension == 1 ? "inf" : dimension == 2 ? "4" : "3"},
              {"T", Kind::kReal, "8"},
              {"time_samples", Kind::kInteger, "400"},
              {"s_min", Kind::kReal, "1e-3"},
              {"expect_min", Kind::kOptionalReal, "none"},
              {"expect_max", Kind::kOptionalReal, "none"}};
    case ExperimentType::kBilinear:
      return {{"lambdas_fixed", Kind::kRealList, "4"},
              {"lambda_sweep", Kind::kRealList, "8,16,32,64,128"},
              {"draws", Kind::kInteger, "20"},
              {"b", Kind::kReal, "0.6"},
              {"T", Kind::kReal, "1"},
              {"time_samples", Kind::kInteger, "64"},
              {"regime", Kind::kText, "high-frequency"},
              {"spread_max", Kind::kOptionalReal, "none"}};
    case ExperimentType::kEvolve:
      return {{"nonlinearity", Kind::kText, "plus_cube"},
              {"amplitude", Kind::kReal, "0.1"},
              {"width", Kind::kReal, "6"},
              {"carrier", Kind::kReal, "0.5"},
              {"dt", Kind::kReal, "1e-3"},
              {"steps", Kind::kInteger, "1000"},
              {"record_every", Kind::kInteger, "10"},
              {"snapshot_every", Kind::kInteger, "0"},
              {"drift_max", Kind::kOptionalReal, "none"}};
    case ExperimentType::kGevreyTrack:
      return {{"nonlinearity", Kind::kText, "plus_cube"},
              {"sigma0", Kind::kReal, "1"},
              {"amplitude", Kind::kReal, "0.5"},
              {"s", Kind::kReal, "2"},
              {"dt", Kind::kReal, "1e-3"},
              {"final_time", Kind::kReal, "100"},
              {"samples", Kind::kInteger, "41"},
              {"t_first", Kind::kReal, "0.1"},
              {"fit_lo", Kind::kReal, "1"},
              {"fit_hi", Kind::kReal, "100"},
              {"expect_min", Kind::kOptionalReal, "none"},
              {"expect_max", Kind::kOptionalReal, "none"}};
  }
  return {};
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Line number of every "section.key" and "[section]", mirroring the INI reader.
std::map<std::string, int> line_index(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line, section;
  for (int number = 1; std::getline(in, line); ++number) {
    line = trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line[0] == '[') {
      section = trim(line.substr(1, line.find(']') - 1));
      lines.emplace("[" + section + "]", number);
    } else if (const auto eq = line.find('='); eq != std::string::npos) {
      lines.emplace(section + "." + trim(line.substr(0, eq)), number);
    }
  }
  return lines;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : lines_(line_index(text)) {}

  int line_of(const std::string& path) const {
    const auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ConfigError(message, line_of(path));
  }

  Real parse_real(const std::string& path, std::string text) const {
    text = trim(text);
    Real scale = 1;
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
      scale = kPi;
      text = trim(text.substr(0, text.size() - 2));
      if (text.empty()) text = "1";
    }
    Real value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value))
      fail(path, path + ": expected a number, got '" + text + "'");
    return value * scale;
  }

  long long parse_integer(const std::string& path, std::string text) const {
    text = trim(text);
    long long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      fail(path, path + ": expected an integer, got '" + text + "'");
    return value;
  }

  std::uint64_t parse_seed(const std::string& path, std::string text) const {
    text = trim(text);
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      fail(path, path + ": expected an unsigned 64-bit integer, got '" + text + "'");
    return value;
  }

  ParamValue parse(const std::string& path, Kind kind, const std::string& text) const {
    switch (kind) {
      case Kind::kInteger: return parse_integer(path, text);
      case Kind::kReal: return parse_real(path, text);
      case Kind::kOptionalReal: {
        const std::string t = trim(text);
        if (t.empty() || t == "none") return std::monostate{};
        return parse_real(path, t);
      }
      case Kind::kRealList: {
        std::vector<Real> values;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) values.push_back(parse_real(path, item));
        if (values.empty()) fail(path, path + ": empty list");
        return values;
      }
      case Kind::kText: return trim(text);
    }
    return std::monostate{};
  }

 private:
  std::map<std::string, int> lines_;
};

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

bool dyadic(Real lambda) {
  int exponent = 0;
  return lambda > 0 && std::isfinite(lambda) && std::frexp(lambda, &exponent) == 0.5;
}

void validate(const ExperimentConfig& c, const Reader& reader) {
  const auto key = [](const std::string& k) { return "experiment." + k; };
  const auto require = [&](bool ok, const std::string& k, const std::string& message) {
    if (!ok) reader.fail(key(k), key(k) + " " + message);
  };
  const auto positive = [&](const std::string& k) { require(c.real(k) > 0, k, "must be positive"); };
  const auto at_least = [&](const std::string& k, long long lo) {
    require(c.integer(k) >= lo, k, "must be at least " + std::to_string(lo));
  };
  const auto nonlinearity = [&](const std::string& k) {
    try {
      return parse_nonlinearity(c.text(k));
    } catch (const std::exception&) {
      reader.fail(key(k), key(k) + " must be one of none, plus_square, minus_square, plus_cube, minus_cube");
    }
  };
  const GridSpec grid(c.dimension, c.period, c.points);

  switch (c.type) {
    case ExperimentType::kDispersion:
      positive("r_min");
      require(c.real("r_max") > c.real("r_min"), "r_max", "must exceed r_min");
      at_least("samples", 2);
      break;
    case ExperimentType::kDecay: {
      const std::string& kernel = c.text("kernel");
      require(kernel == "localized" || kernel == "uniform", "kernel", "must be localized or uniform");
      if (kernel == "uniform") require(c.dimension == 1, "kernel", "uniform requires grid.dimension = 1");
      positive("lambda");
      for (Real t : c.reals("times")) require(t > 0, "times", "entries must be positive");
      at_least("log_points", 16);
      break;
    }
    case ExperimentType::kStrichartz: {
      Exponent q = Exponent::infinity(), r = Exponent::infinity();
      try {
        q = Exponent::parse(c.text("q"));
      } catch (const std::exception& e) {
        reader.fail(key("q"), key("q") + ": " + e.what());
      }
      try {
        r = Exponent::parse(c.text("r"));
      } catch (const std::exception& e) {
        reader.fail(key("r"), key("r") + ": " + e.what());
      }
      require(AdmissiblePair::admissible(c.dimension, q, r), "r",
              "(q, r) = (" + c.text("q") + ", " + c.text("r") + ") is not admissible in dimension " +
                  std::to_string(c.dimension));
      require(c.reals("lambdas").size() >= 2, "lambdas", "needs at least two entries");
      for (Real l : c.reals("lambdas"))
        require(dyadic(l) && l >= 4 && DyadicBand(l).fits(grid), "lambdas",
                "entries must be powers of two >= 4 with 2 lambda below the grid Nyquist");
      positive("T");
      at_least("time_samples", 3);
      positive("s_min");
      break;
    }
    case ExperimentType::kBilinear: {
      const auto& fixed = c.reals("lambdas_fixed");
      require(fixed.size() == 1 || fixed.size() == 2, "lambdas_fixed", "takes one (bilinear) or two (trilinear) entries");
      for (Real l : fixed) require(dyadic(l), "lambdas_fixed", "entries must be powers of two");
      for (Real l : c.reals("lambda_sweep")) require(dyadic(l), "lambda_sweep", "entries must be powers of two");
      at_least("draws", 1);
      require(c.real("b") > 0.5, "b", "must exceed 1/2");
      positive("T");
      require(c.integer("time_samples") >= 8 && is_power_of_two(c.integer("time_samples")), "time_samples",
              "must be a power of two >= 8");
      const std::string& regime = c.text("regime");
      require(regime == "general" || regime == "high-frequency" || regime == "high-median", "regime",
              "must be general, high-frequency or high-median");
      break;
    }
    case ExperimentType::kEvolve:
      nonlinearity("nonlinearity");
      require(c.real("amplitude") >= 0, "amplitude", "must be nonnegative");
      positive("width");
      positive("dt");
      at_least("steps", 1);
      at_least("record_every", 1);
      at_least("snapshot_every", 0);
      require(c.integer("snapshot_every") % c.integer("record_every") == 0, "snapshot_every",
              "must be a multiple of record_every");
      break;
    case ExperimentType::kGevreyTrack: {
      const Nonlinearity nl = nonlinearity("nonlinearity");
      require(nl == Nonlinearity::kNone || is_cubic(nl), "nonlinearity", "must be cubic or none");
      require(c.dimension == 1, "nonlinearity", "gevrey-track requires grid.dimension = 1");
      positive("sigma0");
      positive("amplitude");
      require(c.real("s") >= 0, "s", "must be nonnegative");
      positive("dt");
      positive("t_first");
      require(c.real("final_time") > c.real("t_first"), "final_time", "must exceed t_first");
      at_least("samples", 2);
      require(c.real("fit_hi") > c.real("fit_lo"), "fit_hi", "must exceed fit_lo");
      break;
    }
  }
}

json param_json(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>)
          return nullptr;
        else
          return v;
      },
      value);
}

std::string param_text(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "none";
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, Real>) {
          return detail::format_real(v);
        } else if constexpr (std::is_same_v<V, std::vector<Real>>) {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + detail::format_real(v[i]);
          return s;
        } else {
          return v;
        }
      },
      value);
}

}  // namespace

std::string_view to_string(ExperimentType type) {
  for (const auto& [t, name] : kTypeNames)
    if (t == type) return name;
  return "unknown";
}

ExperimentType parse_experiment_type(std::string_view name) {
  for (const auto& [t, n] : kTypeNames)
    if (n == name) return t;
  throw ConfigError("unknown experiment type '" + std::string(name) +
                    "' (dispersion, decay, strichartz, bilinear, evolve, gevrey-track)");
}

long long ExperimentConfig::integer(const std::string& key) const { return std::get<long long>(params.at(key)); }
Real ExperimentConfig::real(const std::string& key) const { return std::get<Real>(params.at(key)); }
std::optional<Real> ExperimentConfig::optional_real(const std::string& key) const {
  const ParamValue& v = params.at(key);
  if (std::holds_alternative<std::monostate>(v)) return std::nullopt;
  return std::get<Real>(v);
}
const std::vector<Real>& ExperimentConfig::reals(const std::string& key) const {
  return std::get<std::vector<Real>>(params.at(key));
}
const std::string& ExperimentConfig::text(const std::string& key) const { return std::get<std::string>(params.at(key)); }

ExperimentConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }
  const Reader reader(text);

  const std::map<std::string, std::vector<std::string>> fixed_keys = {
      {"grid", {"dimension", "points", "period"}}, {"dispersion", {"beta"}}, {"experiment", {"type", "seed"}},
      {"output", {"directory"}}};
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty())
      reader.fail("." + name, "key '" + name + "' appears outside a section");
    if (!fixed_keys.count(name)) reader.fail("[" + name + "]", "unknown section [" + name + "]");
  }
  const auto value = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto sec = tree.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return *v;
  };

  ExperimentConfig c;
  if (const auto v = value("grid", "dimension")) {
    c.dimension = static_cast<int>(reader.parse_integer("grid.dimension", *v));
    if (c.dimension < 1 || c.dimension > 3) reader.fail("grid.dimension", "grid.dimension must be 1, 2 or 3");
  }
  if (const auto v = value("grid", "points")) {
    const long long n = reader.parse_integer("grid.points", *v);
    if (n < 8 || !is_power_of_two(n) || n > (1LL << 24))
      reader.fail("grid.points", "grid.points must be a power of two between 8 and 2^24, got " + trim(*v));
    c.points = static_cast<int>(n);
  }
  if (const auto v = value("grid", "period")) {
    c.period = reader.parse_real("grid.period", *v);
    if (!(c.period > 0)) reader.fail("grid.period", "grid.period must be positive");
  }
  const auto beta = value("dispersion", "beta");
  if (!beta) throw ConfigError("missing key dispersion.beta");
  {
    const long long b = reader.parse_integer("dispersion.beta", *beta);
    if (b < -1 || b > 1) reader.fail("dispersion.beta", "beta must be -1, 0, or 1");
    c.beta = static_cast<int>(b);
  }
  const auto type = value("experiment", "type");
  if (!type) throw ConfigError("missing key experiment.type");
  try {
    c.type = parse_experiment_type(trim(*type));
  } catch (const ConfigError& e) {
    reader.fail("experiment.type", e.what());
  }
  if (const auto v = value("experiment", "seed")) c.seed = reader.parse_seed("experiment.seed", *v);
  if (const auto v = value("output", "directory")) c.output = trim(*v);

  const auto specs = schema(c.type, c.dimension);
  for (const auto& [section, child] : tree) {
    for (const auto& [key, leaf] : child) {
      const auto& known = fixed_keys.at(section);
      bool ok = std::find(known.begin(), known.end(), key) != known.end();
      if (section == "experiment")
        ok = ok || std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
      if (!ok)
        reader.fail(section + "." + key, "unknown key " + section + "." + key +
                                             (section == "experiment" ? " for experiment type " +
                                                                            std::string(to_string(c.type))
                                                                      : ""));
    }
  }
  for (const ParamSpec& spec : specs) {
    const std::string path = "experiment." + spec.key;
    const auto v = value("experiment", spec.key);
    c.params[spec.key] = reader.parse(path, spec.kind, v ? *v : spec.fallback);
  }
  validate(c, reader);
  return c;
}

ExperimentConfig parse_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

json to_json(const ExperimentConfig& c) {
  json out;
  out["grid"] = {{"dimension", c.dimension}, {"points", c.points}, {"period", c.period}};
  out["dispersion"] = {{"beta", c.beta}};
  json experiment;
  experiment["type"] = std::string(to_string(c.type));
  experiment["seed"] = c.seed;
  for (const auto& spec : schema(c.type, c.dimension)) experiment[spec.key] = param_json(c.params.at(spec.key));
  out["experiment"] = std::move(experiment);
  out["output"] = {{"directory", c.output.string()}};
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  std::ostringstream ini;
  try {
    ini << "[grid]\ndimension = " << j.at("grid").at("dimension").get<int>()
        << "\npoints = " << j.at("grid").at("points").get<long long>()
        << "\nperiod = " << detail::format_real(j.at("grid").at("period").get<Real>()) << "\n";
    ini << "[dispersion]\nbeta = " << j.at("dispersion").at("beta").get<int>() << "\n";
    ini << "[experiment]\n";
    const json& e = j.at("experiment");
    const ExperimentType type = parse_experiment_type(e.at("type").get<std::string>());
    ini << "type = " << to_string(type) << "\nseed = " << e.at("seed").get<std::uint64_t>() << "\n";
    for (const auto& spec : schema(type, j.at("grid").at("dimension").get<int>())) {
      if (!e.contains(spec.key)) continue;
      const json& v = e.at(spec.key);
      ParamValue value;
      if (v.is_null())
        value = std::monostate{};
      else if (spec.kind == Kind::kInteger)
        value = v.get<long long>();
      else if (spec.kind == Kind::kReal || spec.kind == Kind::kOptionalReal)
        value = v.get<Real>();
      else if (spec.kind == Kind::kRealList)
        value = v.get<std::vector<Real>>();
      else
        value = v.get<std::string>();
      ini << spec.key << " = " << param_text(value) << "\n";
    }
    ini << "[output]\ndirectory = " << j.at("output").at("directory").get<std::string>() << "\n";
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("malformed config JSON: ") + ex.what());
  }
  return parse_config_text(ini.str());
}

// ---------------------------------------------------------------------------
// Experiment runs

namespace {

struct RunContext {
  const ExperimentConfig& config;
  fs::path dir;
  int threads;
  json results = json::object();
  json checks = json::object();
  std::vector<std::string> files;
  bool blew_up = false;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }

  void band_check(const std::string& name, Real value, std::optional<Real> lo, std::optional<Real> hi) {
    if (!lo && !hi) return;
    checks[name] = (!lo || value >= *lo) && (!hi || value <= *hi);
  }
};

json fit_json(const DecayFitResult& fit) {
  return {{"exponent", fit.exponent},
          {"log_prefactor", fit.log_prefactor},
          {"residual_rms", fit.residual_rms},
          {"sample_range", {fit.sample_range.first, fit.sample_range.second}}};
}

json finite_or_null(Real v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void run_dispersion(RunContext& ctx) {
  const auto& c = ctx.config;
  const DispersionParams params(c.beta);
  const int count = static_cast<int>(c.integer("samples"));
  std::vector<Real> r(count);
  const Real lo = std::log(c.real("r_min")), hi = std::log(c.real("r_max"));
  for (int i = 0; i < count; ++i) r[i] = std::exp(lo + (hi - lo) * i / (count - 1));

  detail::CsvWriter csv(ctx.file("dispersion.csv"), {"r", "m", "dm", "d2m", "d3m", "d4m", "d5m", "d6m"});
  for (Real x : r) {
    std::vector<Real> row{x, phase(params, x)};
    for (int k = 1; k <= 6; ++k) row.push_back(phase_derivative(params, x, k));
    csv.row(row);
  }
  if (!params.is_signed()) return;

  // Bounds stated for r >= 1 (beta = -1) use the part of the grid there.
  using B = ComparabilityBound;
  const std::vector<std::pair<B, int>> bounds = {
      {B::kPhaseVsCubicWeight, 0}, {B::kFirstVsLinearWeight, 1}, {B::kSecondUpperPlusOne, 1},
      {B::kSecondLowerPlusOne, 1}, {B::kFirstVsSquare, -1},      {B::kSecondVsLinear, -1},
      {B::kThirdDerivative, -1},   {B::kFourthDerivative, -1},   {B::kFifthDerivative, -1},
      {B::kSixthDerivative, -1}};
  json report = json::object();
  for (const auto& [bound, beta] : bounds) {
    if (beta != 0 && beta != c.beta) continue;
    std::vector<Real> grid;
    for (Real x : r)
      if (beta != -1 || x >= 1) grid.push_back(x);
    if (grid.empty()) continue;
    const RatioStats stats = comparability_report(params, bound, grid);
    const ComparabilityWindow window = calibrated_window(bound);
    const std::string name(to_string(bound));
    report[name] = {{"min", stats.min},
                    {"max", stats.max},
                    {"argmin", stats.argmin},
                    {"argmax", stats.argmax},
                    {"window", {window.lower, finite_or_null(window.upper)}}};
    ctx.checks[name] = stats.min >= window.lower && stats.max <= window.upper;
  }
  ctx.results["comparability"] = std::move(report);
}

void write_sweep_outputs(RunContext& ctx, const std::vector<KernelSweepRow>& rows) {
  write_kernel_sweep_csv(ctx.file("decay.csv"), rows);
  std::vector<Real> t, sup;
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
  for (const auto& row : rows) {
    t.push_back(row.t);
    sup.push_back(row.sup_abs);
    lo = std::min(lo, row.scaled_value);
    hi = std::max(hi, row.scaled_value);
  }
  const Real spread = lo > 0 ? hi / lo : std::numeric_limits<Real>::infinity();
  ctx.results["scaled_spread"] = finite_or_null(spread);
  const auto& c = ctx.config;
  if (rows.size() >= 6) {
    const DecayFitResult fit = decay_fit(t, sup);
    ctx.results["fit"] = fit_json(fit);
    ctx.band_check("exponent_in_band", fit.exponent, c.optional_real("expect_min"), c.optional_real("expect_max"));
  } else {
    ctx.results["fit"] = nullptr;
    if (c.optional_real("expect_min") || c.optional_real("expect_max")) ctx.checks["exponent_in_band"] = false;
  }
  ctx.band_check("scaled_spread", spread, std::nullopt, c.optional_real("scaled_spread_max"));
}

void run_decay(RunContext& ctx) {
  const auto& c = ctx.config;
  const DispersionParams params(c.beta);
  const auto& times = c.reals("times");
  if (c.text("kernel") == "uniform") {
    write_sweep_outputs(ctx, uniform_decay_sweep(params, times));
    return;
  }
  SupScanOptions options;
  options.log_points = static_cast<int>(c.integer("log_points"));
  options.threads = ctx.threads;
  write_sweep_outputs(ctx, kernel_decay_sweep(params, c.dimension, c.real("lambda"), times, options));
}

void run_strichartz(RunContext& ctx) {
  const auto& c = ctx.config;
  const GridSpec grid(c.dimension, c.period, c.points);
  StrichartzSettings settings;
  settings.lambdas = c.reals("lambdas");
  settings.q = Exponent::parse(c.text("q"));
  settings.r = Exponent::parse(c.text("r"));
  settings.T = c.real("T");
  settings.time_samples = static_cast<int>(c.integer("time_samples"));
  settings.s_min = c.real("s_min");
  settings.seed = c.seed;
  const StrichartzSweep sweep = strichartz_sweep(DispersionParams(c.beta), grid, settings);
  write_estimate_csv(ctx.file("strichartz.csv"), sweep.rows);
  ctx.results["slope"] = fit_json(sweep.slope);
  ctx.results["ratio_spread"] = finite_or_null(sweep.spread);
  ctx.band_check("slope_in_band", sweep.slope.exponent, c.optional_real("expect_min"), c.optional_real("expect_max"));
}

void run_bilinear(RunContext& ctx) {
  const auto& c = ctx.config;
  const GridSpec grid(c.dimension, c.period, c.points);
  EstimateSettings settings;
  settings.fixed = c.reals("lambdas_fixed");
  settings.sweep = c.reals("lambda_sweep");
  settings.draws = static_cast<int>(c.integer("draws"));
  settings.b = c.real("b");
  settings.T = c.real("T");
  settings.time_samples = static_cast<int>(c.integer("time_samples"));
  const std::string& regime = c.text("regime");
  settings.regime = regime == "general"          ? EstimateRegime::kGeneral
                    : regime == "high-frequency" ? EstimateRegime::kHighFrequency
                                                 : EstimateRegime::kHighMedian;
  settings.seed = c.seed;
  const EstimateSweep sweep = estimate_sweep(DispersionParams(c.beta), grid, settings);
  write_estimate_csv(ctx.file(settings.fixed.size() == 1 ? "bilinear.csv" : "trilinear.csv"), sweep.rows);
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
  for (const auto& row : sweep.rows) lo = std::min(lo, row.value.ratio), hi = std::max(hi, row.value.ratio);
  ctx.results["form"] = settings.fixed.size() == 1 ? "bilinear" : "trilinear";
  ctx.results["ratio_min"] = lo;
  ctx.results["ratio_max"] = hi;
  ctx.results["spread"] = finite_or_null(sweep.spread);
  ctx.band_check("spread", sweep.spread, std::nullopt, c.optional_real("spread_max"));
}

void run_evolve(RunContext& ctx) {
  const auto& c = ctx.config;
  const GridSpec grid(c.dimension, c.period, c.points);
  const DispersionParams params(c.beta);
  const Nonlinearity nl = parse_nonlinearity(c.text("nonlinearity"));

  const Real width = c.real("width"), carrier = c.real("carrier");
  ArrayXr samples(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = sample_position(grid, i);
    Real r2 = 0;
    for (int d = 0; d < grid.dimension(); ++d) r2 += (x[d] - c.period / 2) * (x[d] - c.period / 2);
    samples[static_cast<Eigen::Index>(i)] = std::exp(-r2 / (width * width)) * std::cos(carrier * (x[0] - c.period / 2));
  }
  SpectralField u0 = dealias(analyze(grid, samples), degree(nl));
  const Real norm = spatial_norm(u0, NormSpec::sobolev(2));
  if (norm > 0) u0 *= c.real("amplitude") / norm;
  const EvolutionState initial{u0, SpectralField(grid), 0};

  StepOptions options;
  options.record_every = static_cast<int>(c.integer("record_every"));
  const int steps = static_cast<int>(c.integer("steps"));
  const StepResult run = step_evolve(params, initial, nl, c.real("dt"), steps, options);
  write_trajectory_csv(ctx.file("trajectory.csv"), params, nl, run.trajectory);

  if (const long long every = c.integer("snapshot_every"); every > 0) {
    fs::create_directories(ctx.dir / "snapshots");
    for (std::size_t j = 0; j < run.trajectory.size(); ++j) {
      const long long step = std::llround(run.trajectory[j].time / c.real("dt"));
      if (step % every != 0) continue;
      std::ostringstream stem;
      stem << "snapshots/u_" << std::setw(8) << std::setfill('0') << step;
      write_field(run.trajectory[j].u, ctx.dir / stem.str());
      ctx.files.push_back(stem.str());
    }
  }

  const Real e0 = energy(params, run.trajectory.front(), nl);
  const Real e1 = energy(params, run.trajectory.back(), nl);
  const Real drift = e0 != 0 ? std::abs(e1 - e0) / std::abs(e0) : std::abs(e1 - e0);
  ctx.results["steps_taken"] = run.steps_taken;
  ctx.results["final_time"] = run.trajectory.back().time;
  ctx.results["energy_initial"] = e0;
  ctx.results["energy_final"] = e1;
  ctx.results["relative_energy_drift"] = drift;
  ctx.results["blew_up"] = run.blew_up;
  ctx.blew_up = run.blew_up;
  ctx.band_check("energy_drift", drift, std::nullopt, c.optional_real("drift_max"));
}

void run_gevrey(RunContext& ctx) {
  const auto& c = ctx.config;
  RadiusTrackConfig track;
  track.points = c.points;
  track.period = c.period;
  track.beta = c.beta;
  track.sigma0 = c.real("sigma0");
  track.amplitude = c.real("amplitude");
  track.s = c.real("s");
  track.dt = c.real("dt");
  track.final_time = c.real("final_time");
  track.samples = static_cast<int>(c.integer("samples"));
  track.t_first = c.real("t_first");
  track.fit_lo = c.real("fit_lo");
  track.fit_hi = c.real("fit_hi");
  track.seed = c.seed;
  track.nl = parse_nonlinearity(c.text("nonlinearity"));
  const RadiusReport report = radius_decay_report(track);
  write_radius_csv(ctx.file("radius.csv"), report.samples);

  bool monotone = true;
  for (std::size_t i = 1; i < report.samples.size(); ++i)
    monotone = monotone && report.samples[i].sigma <= report.samples[i - 1].sigma * (1 + 1e-12);
  ctx.results["budget"] = report.budget;
  ctx.results["fit"] = report.fit_valid ? fit_json(report.fit) : json(nullptr);
  ctx.results["sigma_nonincreasing"] = monotone;
  ctx.results["blew_up"] = report.blew_up;
  ctx.blew_up = report.blew_up;
  if (c.optional_real("expect_min") || c.optional_real("expect_max")) {
    if (report.fit_valid)
      ctx.band_check("exponent_in_band", report.fit.exponent, c.optional_real("expect_min"),
                     c.optional_real("expect_max"));
    else
      ctx.checks["exponent_in_band"] = false;
    ctx.checks["sigma_nonincreasing"] = monotone;
  }
}

std::string timestamp(std::time_t now, const char* format) {
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, format);
  return out.str();
}

void write_json(const fs::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  const std::time_t now = std::time(nullptr);
  const fs::path root = options.output.value_or(config.output);
  const std::string base = std::string(to_string(config.type)) + "_" + timestamp(now, "%Y%m%d-%H%M%S");
  fs::create_directories(root);
  fs::path dir = root / base;
  for (int k = 2; fs::exists(dir); ++k) dir = root / (base + "_" + std::to_string(k));
  fs::create_directories(dir);

  RunOutcome outcome;
  outcome.directory = dir;
  json manifest;
  manifest["format"] = "boussinesq-run/1";
  manifest["version"] = BOUSSINESQ_VERSION;
  manifest["started_utc"] = timestamp(now, "%Y-%m-%dT%H:%M:%SZ");
  manifest["threads"] = options.threads;
  manifest["dry_run"] = options.dry_run;
  manifest["config"] = to_json(config);

  if (options.dry_run) {
    manifest["wall_time_s"] = 0.0;
    write_json(dir / "manifest.json", manifest);
    return outcome;
  }

  RunContext ctx{config, dir, std::max(1, options.threads), json::object(), json::object(), {}, false};
  json summary;
  summary["experiment"] = std::string(to_string(config.type));
  std::string error;
  try {
    switch (config.type) {
      case ExperimentType::kDispersion: run_dispersion(ctx); break;
      case ExperimentType::kDecay: run_decay(ctx); break;
      case ExperimentType::kStrichartz: run_strichartz(ctx); break;
      case ExperimentType::kBilinear: run_bilinear(ctx); break;
      case ExperimentType::kEvolve: run_evolve(ctx); break;
      case ExperimentType::kGevreyTrack: run_gevrey(ctx); break;
    }
  } catch (const std::exception& e) {
    error = e.what();
  }

  bool checks_pass = true;
  for (const auto& [name, ok] : ctx.checks.items()) checks_pass = checks_pass && ok.get<bool>();
  if (!error.empty() || ctx.blew_up) {
    summary["status"] = "error";
    summary["error"] = error.empty() ? "blow-up: solution left the configured bound" : error;
    outcome.exit_code = kExitRuntime;
  } else if (!checks_pass) {
    summary["status"] = "check_failed";
    outcome.exit_code = kExitCheckFailed;
  } else {
    summary["status"] = "ok";
  }
  summary["results"] = std::move(ctx.results);
  summary["checks"] = std::move(ctx.checks);
  summary["files"] = ctx.files;
  write_json(dir / "summary.json", summary);

  manifest["wall_time_s"] = std::chrono::duration<Real>(std::chrono::steady_clock::now() - wall_start).count();
  write_json(dir / "manifest.json", manifest);
  outcome.summary = std::move(summary);
  return outcome;
}

}  // namespace boussinesq::cli

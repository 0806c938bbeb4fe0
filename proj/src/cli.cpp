#include "tfbd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include "tfbd/adm_engine.hpp"
#include "tfbd/birth_model.hpp"
#include "tfbd/death_model.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/mc_oracle.hpp"
#include "tfbd/verify.hpp"

namespace tfbd::cli {

namespace {

using json = nlohmann::ordered_json;

struct IoError : Error {
  using Error::Error;
};

struct VerifyFailed {};

// Everything that determines an output file. Round-trips through the manifest.
struct Settings {
  std::string subcommand;
  std::string variant = "tflbdpwi";
  double alpha = 1.0, lambda = 1.0, mu = 1.0, nu = 1.0;
  std::string t;  // empty: per-subcommand default
  int order = kDefaultSeriesOrder;
  int nmax = 30;
  std::int64_t replicas = 100000;
  std::uint64_t seed = 20261016ULL;
  int state_cap = kDefaultStateCap;
  std::string format = "csv";
  std::string suite = "all";
  std::string out;
  unsigned workers = 1;  // never affects output, so not part of the manifest
};

// Flags as given on the command line; unset ones fall back to --config, then defaults.
struct Flags {
  std::optional<std::string> variant, t, format, suite, out, config;
  std::optional<double> alpha, lambda, mu, nu;
  std::optional<int> order, nmax, state_cap;
  std::optional<std::int64_t> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

bool uses_seed(const std::string& sub) { return sub == "simulate" || sub == "verify"; }

json manifest_of(const Settings& s) {
  json m;
  m["tool_version"] = kToolVersion;
  m["subcommand"] = s.subcommand;
  m["variant"] = s.variant;
  m["params"] = {{"alpha", s.alpha}, {"lambda", s.lambda}, {"mu", s.mu}, {"nu", s.nu}};
  m["options"] = {{"t", s.t},           {"order", s.order},         {"nmax", s.nmax},
                  {"replicas", s.replicas}, {"state_cap", s.state_cap}, {"format", s.format},
                  {"suite", s.suite}};
  m["output_path"] = s.out;
  m["master_seed"] = uses_seed(s.subcommand) ? json(s.seed) : json(nullptr);
  return m;
}

Settings load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json m;
  try {
    in >> m;
    Settings s;
    s.subcommand = m.at("subcommand").get<std::string>();
    s.variant = m.value("variant", s.variant);
    const auto& p = m.at("params");
    s.alpha = p.value("alpha", s.alpha);
    s.lambda = p.value("lambda", s.lambda);
    s.mu = p.value("mu", s.mu);
    s.nu = p.value("nu", s.nu);
    if (m.contains("options")) {
      const auto& o = m["options"];
      s.t = o.value("t", s.t);
      s.order = o.value("order", s.order);
      s.nmax = o.value("nmax", s.nmax);
      s.replicas = o.value("replicas", s.replicas);
      s.state_cap = o.value("state_cap", s.state_cap);
      s.format = o.value("format", s.format);
      s.suite = o.value("suite", s.suite);
    }
    s.out = m.value("output_path", s.out);
    if (m.contains("master_seed") && !m["master_seed"].is_null()) {
      s.seed = m["master_seed"].get<std::uint64_t>();
    }
    return s;
  } catch (const json::exception& e) {
    throw ParameterError("malformed config file " + path + ": " + e.what());
  }
}

template <class T>
void overlay(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

// ---------------------------------------------------------------------------
// Tables

struct Raw {
  std::string text;  // emitted verbatim in CSV and JSON (numbers, exact integers)
};
using Cell = std::variant<double, std::int64_t, std::string, Raw>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* r = std::get_if<Raw>(&c)) return r->text;
  return std::get<std::string>(c);
}

std::string json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? format_double(*d) : json(format_double(*d)).dump();
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* r = std::get_if<Raw>(&c)) return json(r->text).dump();  // big integers stay exact
  return json(std::get<std::string>(c)).dump();
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
    return os.str();
  }
  os << "{\"columns\":[";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << json(t.columns[i]).dump();
  os << "],\"rows\":[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n" : "\n") << '[';
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) os << (i ? "," : "") << json_cell(t.rows[r][i]);
    os << ']';
  }
  os << "\n]}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands

ModelParams model_of(const Settings& s) { return ModelParams(s.alpha, s.lambda, s.mu, FracOrder(s.nu)); }

void require_variant(const Settings& s) {
  if (s.variant != "tflbdpwi" && s.variant != "tflbpwi" && s.variant != "tfldpwi") {
    throw ParameterError("unknown variant '" + s.variant + "' (expected tflbdpwi, tflbpwi or tfldpwi)");
  }
}

Table cmd_coeffs(const Settings& s) {
  const auto table = coeff_table_equal_rates(s.order);
  Table t{{"k", "n", "c"}, {}};
  for (int k = 0; k <= s.order; ++k) {
    for (int n = 0; n <= k; ++n) {
      t.rows.push_back({std::int64_t{k}, std::int64_t{n}, Raw{table.exact(n, k).str()}});
    }
  }
  return t;
}

Table cmd_pmf(const Settings& s) {
  require_variant(s);
  const auto times = parse_time_grid(s.t);
  Table out{{"t", "n", "probability", "error", "method", "regularity_defect"}, {}};
  if (s.variant == "tflbdpwi") {
    const AdmSeries series(model_of(s), s.order);
    for (double t : times) {
      const auto p = series.pmf(t, s.nmax);
      for (int n = 0; n <= s.nmax; ++n) {
        out.rows.push_back({t, std::int64_t{n}, p.probs[n], p.per_state_error[n], std::string("adm_series"),
                            p.regularity_defect});
      }
    }
  } else if (s.variant == "tflbpwi") {
    const BirthParams b(s.alpha, s.lambda, FracOrder(s.nu));
    for (double t : times) {
      std::vector<ClosedFormValue> vals;
      double total = 0.0;
      for (int n = 0; n <= s.nmax; ++n) {
        vals.push_back(pmf_closed_with_error(n, t, b));
        total += vals.back().value;
      }
      for (int n = 0; n <= s.nmax; ++n) {
        out.rows.push_back({t, std::int64_t{n}, vals[n].value, vals[n].error_estimate,
                            std::string("closed_form"), std::abs(total - 1.0)});
      }
    }
  } else {
    const DeathParams d(s.alpha, s.mu, FracOrder(s.nu));
    for (double t : times) {
      const auto p = pmf_death(t, d);
      const double defect = std::abs(p.p0 + p.p1 - 1.0);
      out.rows.push_back({t, std::int64_t{0}, p.p0, 0.0, std::string("closed_form"), defect});
      out.rows.push_back({t, std::int64_t{1}, p.p1, 0.0, std::string("closed_form"), defect});
    }
  }
  return out;
}

Table cmd_components(const Settings& s) {
  const auto times = parse_time_grid(s.t);
  const AdmSeries series(model_of(s), s.order);
  Table out{{"n", "t", "k", "component", "flag"}, {}};
  for (int n = 0; n <= s.nmax; ++n) {
    for (double t : times) {
      for (int k = 0; k <= s.order; ++k) {
        const double c = series.component(n, k, t);
        out.rows.push_back({std::int64_t{n}, t, std::int64_t{k}, c,
                            std::string(n > k ? "structural_zero" : "computed")});
      }
    }
  }
  return out;
}

Table cmd_moments(const Settings& s) {
  require_variant(s);
  const auto times = parse_time_grid(s.t);
  Table out{{"t", "mean", "mean_error", "second_factorial_moment", "second_factorial_moment_error",
             "variance", "variance_error", "method"},
            {}};
  if (s.variant == "tflbdpwi") {
    const ModelParams m = model_of(s);
    if (!m.equal_rates()) {
      throw ParameterError("moments of the general birth-death variant are available only for alpha = lambda = mu");
    }
    const AdmSeries series(m, s.order);
    for (double t : times) {
      const auto m1 = series.mean(t);
      const auto m2 = series.second_factorial_moment(t);
      const auto v = series.variance(t);
      out.rows.push_back({t, m1.value, m1.error_bound(), m2.value, m2.error_bound(), v.value, v.error_bound(),
                          std::string("adm_series")});
    }
  } else if (s.variant == "tflbpwi") {
    const BirthParams b(s.alpha, s.lambda, FracOrder(s.nu));
    for (double t : times) {
      const double m1 = mean_birth(t, b);
      const double m2 = second_factorial_moment_birth(t, b);
      out.rows.push_back({t, m1, 0.0, m2, 0.0, variance_birth(t, b), 0.0, std::string("closed_form")});
    }
  } else {
    const DeathParams d(s.alpha, s.mu, FracOrder(s.nu));
    for (double t : times) {
      const double p1 = pmf_death(t, d).p1;
      out.rows.push_back({t, p1, 0.0, 0.0, 0.0, p1 * (1.0 - p1), 0.0, std::string("closed_form")});
    }
  }
  return out;
}

Table cmd_simulate(const Settings& s) {
  const auto times = parse_time_grid(s.t);
  Table out{{"t", "state", "probability", "std_error"}, {}};
  for (double t : times) {
    SimConfig cfg{model_of(s), t, s.replicas, s.seed};
    cfg.state_cap = s.state_cap;
    cfg.workers = s.workers;
    const auto pmf = empirical_pmf(cfg);
    for (std::size_t n = 0; n < pmf.probs.size(); ++n) {
      out.rows.push_back({t, std::to_string(n), pmf.probs[n], pmf.std_errors[n]});
    }
    const double o = pmf.overflow_mass;
    out.rows.push_back({t, std::string("overflow"), o, std::sqrt(o * (1 - o) / static_cast<double>(s.replicas))});
  }
  return out;
}

std::string cmd_verify(const Settings& s, bool& passed) {
  VerifyOptions o;
  o.times = parse_time_grid(s.t);
  o.alpha = s.alpha;
  o.lambda = s.lambda;
  o.mu = s.mu;
  o.nu = s.nu;
  o.order = s.order;
  o.n_max = s.nmax;
  o.replicas = s.replicas;
  o.seed = s.seed;
  o.workers = s.workers;
  const auto checks = run_suite(s.suite, o);
  passed = true;
  json report;
  report["suite"] = s.suite;
  report["checks"] = json::array();
  for (const auto& c : checks) {
    passed = passed && c.passed;
    report["checks"].push_back({{"name", c.name},
                                {"expected", c.expected},
                                {"actual", c.actual},
                                {"tolerance", format_double(c.tolerance)},
                                {"passed", c.passed}});
  }
  report["passed"] = passed;
  return report.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--alpha", f.alpha, "immigration rate at state 0");
  app.add_option("--lambda", f.lambda, "per-capita birth rate");
  app.add_option("--mu", f.mu, "per-capita death rate");
  app.add_option("--nu", f.nu, "fractional order in (0, 1]");
  app.add_option("--t", f.t, "times: comma list or start:stop:step");
  app.add_option("--order", f.order, "series order K");
  app.add_option("--nmax", f.nmax, "largest state reported");
  app.add_option("--replicas", f.replicas, "Monte Carlo replicas");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--out", f.out, "output file (a manifest is written next to it)");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", f.config, "manifest to replay; explicit flags win");
  app.add_option("--variant", f.variant, "tflbdpwi, tflbpwi or tfldpwi");
  app.add_option("--suite", f.suite, "verify suite: coeffs, regularity, oracles, laplace, all");
  app.add_option("--state-cap", f.state_cap, "histogram truncation for simulate");
  app.add_option("--workers", f.workers, "simulation threads (output does not depend on it)");
}

int execute(Settings s, std::ostream& out) {
  bool passed = true;
  std::string content;
  if (s.subcommand == "verify") {
    content = cmd_verify(s, passed);
  } else {
    Table t;
    if (s.subcommand == "coeffs") t = cmd_coeffs(s);
    else if (s.subcommand == "pmf") t = cmd_pmf(s);
    else if (s.subcommand == "components") t = cmd_components(s);
    else if (s.subcommand == "moments") t = cmd_moments(s);
    else if (s.subcommand == "simulate") t = cmd_simulate(s);
    else throw ParameterError("unknown subcommand '" + s.subcommand + "'");
    content = render(t, s.format);
  }
  if (s.out.empty()) {
    out << content;
  } else {
    write_file(s.out, content);
    write_file(s.out + ".manifest.json", manifest_of(s).dump(2) + "\n");
  }
  if (!passed) throw VerifyFailed{};
  return kExitOk;
}

}  // namespace

std::vector<double> parse_time_grid(const std::string& spec) {
  auto to_double = [&](const std::string& x) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(x, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != x.size() || !std::isfinite(v)) {
      throw ParameterError("bad time value '" + x + "' in '" + spec + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ParameterError("time range must be start:stop:step, got '" + spec + "'");
    const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
    if (!(h > 0.0) || b < a) throw ParameterError("time range needs step > 0 and stop >= start");
    const double count = std::floor((b - a) / h + 1e-9);
    if (count > 1e6) throw ParameterError("time range has too many points");
    for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  }
  if (out.empty()) throw ParameterError("empty time grid");
  for (double t : out) {
    if (t < 0.0) throw ParameterError("times must be >= 0");
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transient probabilities of the time-fractional linear birth-death process with immigration"};
  app.set_version_flag("--version", kToolVersion);
  Flags flags;
  add_common(app, flags);
  app.require_subcommand(0, 1);
  const std::vector<std::pair<std::string, std::string>> subs{
      {"coeffs", "exact coefficient table c[n,k], 0 <= n <= k <= order"},
      {"pmf", "state probabilities per time"},
      {"components", "series components versus k for each (n, t)"},
      {"moments", "mean, second factorial moment and variance"},
      {"simulate", "Monte Carlo histogram of N(L(t))"},
      {"verify", "run a self-check suite and write a JSON report"}};
  for (const auto& [name, help] : subs) add_common(*app.add_subcommand(name, help), flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    Settings s;
    if (flags.config) s = load_manifest(*flags.config);
    if (!app.get_subcommands().empty()) s.subcommand = app.get_subcommands().front()->get_name();
    if (s.subcommand.empty()) {
      err << "error: a subcommand (or --config with a manifest) is required\n";
      return kExitInvalid;
    }
    overlay(s.variant, flags.variant);
    overlay(s.alpha, flags.alpha);
    overlay(s.lambda, flags.lambda);
    overlay(s.mu, flags.mu);
    overlay(s.nu, flags.nu);
    overlay(s.t, flags.t);
    overlay(s.order, flags.order);
    overlay(s.nmax, flags.nmax);
    overlay(s.replicas, flags.replicas);
    overlay(s.seed, flags.seed);
    overlay(s.state_cap, flags.state_cap);
    overlay(s.format, flags.format);
    overlay(s.suite, flags.suite);
    overlay(s.out, flags.out);
    overlay(s.workers, flags.workers);
    if (s.t.empty()) s.t = s.subcommand == "verify" ? "0:0.4:0.1" : "1";
    if (s.format != "csv" && s.format != "json") throw ParameterError("format must be csv or json");
    return execute(std::move(s), out);
  } catch (const VerifyFailed&) {
    err << "verification failed\n";
    return kExitVerifyFailed;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const AccuracyLossError& e) {
    err << "refused (accuracy loss): " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const QuadratureError& e) {
    err << "refused (quadrature): " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const TruncationError& e) {
    err << "refused (truncation): " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace tfbd::cli

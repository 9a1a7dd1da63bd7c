#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "permsft/entropy.hpp"
#include "permsft/error.hpp"
#include "permsft/families.hpp"
#include "permsft/io.hpp"
#include "permsft/mahler.hpp"
#include "permsft/parallel.hpp"
#include "permsft/permanent.hpp"

namespace permsft::cli {

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string inline_json;
  std::size_t dim = 0;
  std::string windows;
  std::string window_json;
  std::string tori;
  std::size_t grid = 64;
  std::size_t levels = 3;
  double eps = 1e-10;
  std::string format;
  unsigned threads = 0;
  double budget = 1e8;
  std::string backend = "auto";
  std::string family;
  std::string params;
  bool no_iper = false;
  bool no_mahler = false;
};

struct UsageError : Error {
  using Error::Error;
};

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round_significant(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

LatticePoint point_from_json(const json& j, std::size_t dim) {
  if (j.is_number_integer()) {
    if (dim != 1) throw UsageError("scalar points need --dim 1");
    return LatticePoint{j.get<std::int64_t>()};
  }
  if (!j.is_array() || j.size() != dim) throw UsageError("point " + j.dump() + " does not have " + std::to_string(dim) + " coordinates");
  std::vector<std::int64_t> c;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw UsageError("point coordinates must be integers");
    c.push_back(x.get<std::int64_t>());
  }
  return LatticePoint(std::move(c));
}

/// Element JSON, or a JSON array of points read as the indicator of that set.
GroupRingElement load_element(const RunConfig& cfg) {
  if (!cfg.input_path.empty() && !cfg.inline_json.empty()) throw UsageError("give --input or --inline, not both");
  const std::string text = !cfg.input_path.empty() ? read_file(cfg.input_path) : cfg.inline_json;
  if (text.empty()) throw UsageError(cfg.command + " needs an element (--input or --inline)");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("element is not valid JSON: ") + e.what());
  }
  if (j.is_object()) {
    GroupRingElement f = parse_element(text);
    if (cfg.dim != 0 && cfg.dim != f.dim()) {
      throw UsageError("--dim " + std::to_string(cfg.dim) + " disagrees with element dimension " + std::to_string(f.dim()));
    }
    return f;
  }
  if (!j.is_array() || j.empty()) throw UsageError("element must be an object or a nonempty array of points");
  const std::size_t dim = cfg.dim != 0 ? cfg.dim : (j.front().is_array() ? j.front().size() : 1);
  std::vector<LatticePoint> pts;
  for (const auto& p : j) pts.push_back(point_from_json(p, dim));
  return GroupRingElement::indicator(Window::collect(std::move(pts)));
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw UsageError("bad " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// "n" or "n0..n1".
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s, const std::string& what) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto n = parse_int(s, what);
    return {n, n};
  }
  const auto lo = parse_int(s.substr(0, dots), what);
  const auto hi = parse_int(s.substr(dots + 2), what);
  if (lo > hi) throw UsageError(what + " range " + s + " is empty");
  return {lo, hi};
}

/// Comma list of "n1xn2x..." extents or "n0..n1" ranges of cubes.
std::vector<TorusQuotient> parse_tori(const std::string& s, std::size_t dim) {
  std::vector<TorusQuotient> out;
  if (s.empty()) return out;
  for (const auto& item : split(s, ',')) {
    if (item.find('x') != std::string::npos) {
      std::vector<std::int64_t> moduli;
      for (const auto& m : split(item, 'x')) moduli.push_back(parse_int(m, "torus extent"));
      if (moduli.size() != dim) throw UsageError("torus " + item + " is not " + std::to_string(dim) + "-dimensional");
      out.emplace_back(std::move(moduli));
    } else {
      const auto [lo, hi] = parse_range(item, "torus size");
      for (auto n = lo; n <= hi; ++n) out.emplace_back(std::vector<std::int64_t>(dim, n));
    }
  }
  return out;
}

std::vector<std::int64_t> parse_sizes(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& item : split(s, ',')) {
    if (item.find('x') != std::string::npos) {
      const auto parts = split(item, 'x');
      for (const auto& p : parts) {
        if (p != parts.front()) throw UsageError("family tori must be square, got " + item);
      }
      out.push_back(parse_int(parts.front(), "torus size"));
      continue;
    }
    const auto [lo, hi] = parse_range(item, "size");
    for (auto n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

WindowSchedule schedule_for(const RunConfig& cfg, std::size_t dim) {
  const std::string spec = cfg.windows.empty() ? (dim == 1 ? "1..10" : "1..4") : cfg.windows;
  const auto [lo, hi] = parse_range(spec, "window range");
  return WindowSchedule::boxes(dim, lo, hi);
}

PermanentOptions permanent_options(const RunConfig& cfg) {
  PermanentOptions o;
  const auto b = parse_backend(cfg.backend);
  if (!b) throw UsageError("unknown backend '" + cfg.backend + "'");
  o.backend = *b;
  if (!(cfg.budget > 0)) throw UsageError("--budget must be positive");
  o.budget = cfg.budget;
  return o;
}

QuadratureConfig quadrature_config(const RunConfig& cfg) {
  QuadratureConfig q;
  q.grid = cfg.grid;
  q.levels = cfg.levels;
  q.eps = cfg.eps;
  q.validate();
  return q;
}

FamilyParams parse_family_params(const FamilySpec& spec, const std::string& text) {
  FamilyParams p;
  p.values.assign(spec.param_names.size(), 1.0);
  p.k = spec.min_k;
  if (text.empty()) return p;
  const char sep = text.find(';') != std::string::npos ? ';' : ',';
  std::size_t position = 0;
  for (const auto& item : split(text, sep)) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    std::string name;
    std::string value = item;
    if (eq != std::string::npos) {
      name = item.substr(0, eq);
      value = item.substr(eq + 1);
    }
    if (name == "K") {
      p.k = static_cast<int>(parse_int(value, "K"));
      continue;
    }
    std::size_t slot = position;
    if (!name.empty()) {
      const auto it = std::find(spec.param_names.begin(), spec.param_names.end(), name);
      if (it == spec.param_names.end()) throw UsageError("family " + spec.name + " has no parameter " + name);
      slot = static_cast<std::size_t>(it - spec.param_names.begin());
    }
    if (slot >= p.values.size()) throw UsageError("too many parameters for family " + spec.name);
    double v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw UsageError("bad parameter value '" + value + "'");
    }
    p.values[slot] = v;
    position = slot + 1;
  }
  return p;
}

// ---------------------------------------------------------------- commands

int cmd_report(const RunConfig& cfg, bool indicator_only, std::ostream& out) {
  GroupRingElement f = load_element(cfg);
  if (indicator_only) f = GroupRingElement::indicator(f.support());
  const Window A = f.support();
  const QuadratureConfig q = quadrature_config(cfg);
  ReportOptions opts;
  opts.permanent = permanent_options(cfg);
  opts.include_iper = !cfg.no_iper;
  if (!cfg.no_mahler) opts.quadrature = &q;
  const EstimateReport report = estimate_report(f, A, schedule_for(cfg, f.dim()), parse_tori(cfg.tori, f.dim()), opts);
  out << (cfg.format == "csv" ? report_csv(report) : report_json(report) + "\n");
  return report.capacity_errors > 0 ? kCapacity : kOk;
}

int cmd_permanent(const RunConfig& cfg, std::ostream& out) {
  const GroupRingElement f = load_element(cfg);
  const Window A = f.support();
  std::vector<Window> windows;
  if (!cfg.window_json.empty()) {
    windows.push_back(parse_window(cfg.window_json));
  } else {
    windows = schedule_for(cfg, f.dim()).windows();
  }
  PermanentOptions opts = permanent_options(cfg);
  opts.integer_mode = f.is_indicator();
  bool refused = false;
  json rows = json::array();
  std::string csv = "window,size,quantity,log_value,normalized,count,backend\n";
  for (const Window& F : windows) {
    for (const bool admissible : {true, false}) {
      const std::string quantity = admissible ? "per" : "iper";
      json row{{"window", window_label(F)}, {"size", F.size()}, {"quantity", quantity}};
      std::string count_text, backend_text;
      double log_value = std::nan("");
      try {
        const PermanentValue v = admissible ? per_AF(f, A, F, opts) : iper_AF(f, A, F, opts);
        log_value = v.log();
        backend_text = std::string(backend_name(v.backend));
        row["backend"] = backend_text;
        if (v.count) {
          row["count"] = *v.count;
          count_text = std::to_string(*v.count);
        }
      } catch (const CapacityError& e) {
        refused = true;
        row["capacity_exceeded"] = true;
        row["error"] = e.what();
      }
      const double normalized = log_value / static_cast<double>(F.size());
      row["log_value"] = number(log_value);
      row["normalized"] = number(normalized);
      rows.push_back(std::move(row));
      csv += window_label(F) + "," + std::to_string(F.size()) + "," + quantity + "," + format_number(log_value) + "," +
             format_number(normalized) + "," + count_text + "," + backend_text + "\n";
    }
  }
  out << (cfg.format == "csv" ? csv : rows.dump(2) + "\n");
  return refused ? kCapacity : kOk;
}

int cmd_mahler(const RunConfig& cfg, std::ostream& out) {
  const GroupRingElement f = load_element(cfg);
  const QuadratureResult r = mahler_measure(f, quadrature_config(cfg));
  std::optional<double> jensen;
  if (f.dim() == 1) jensen = mahler_measure_jensen(f);
  if (cfg.format == "csv") {
    out << "value,error_estimate,converged,order,eps_spread,jensen\n"
        << format_number(r.value) << "," << format_number(r.error_estimate) << "," << (r.converged ? "true" : "false")
        << "," << format_number(r.order) << "," << format_number(r.eps_spread) << ","
        << (jensen ? format_number(*jensen) : "") << "\n";
    return kOk;
  }
  json levels = json::array();
  for (double v : r.levels) levels.push_back(number(v));
  json j{{"value", number(r.value)},       {"error_estimate", number(r.error_estimate)},
         {"converged", r.converged},       {"order", number(r.order)},
         {"eps_spread", number(r.eps_spread)}, {"levels", levels}};
  if (jensen) j["jensen"] = number(*jensen);
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_periodic(const RunConfig& cfg, std::ostream& out) {
  const GroupRingElement f = load_element(cfg);
  const auto tori = parse_tori(cfg.tori, f.dim());
  if (tori.empty()) throw UsageError("periodic needs --tori");
  const auto rows = torus_estimates(f, tori, permanent_options(cfg));
  bool refused = false;
  json j = json::array();
  std::string csv = "torus,size,log_value,normalized,count\n";
  for (const auto& r : rows) {
    refused = refused || r.capacity_exceeded;
    json row{{"torus", r.window}, {"size", r.size}, {"log_value", number(r.log_value)}, {"normalized", number(r.normalized)}};
    if (r.count) row["count"] = *r.count;
    if (r.capacity_exceeded) row["capacity_exceeded"] = true;
    j.push_back(std::move(row));
    csv += r.window + "," + std::to_string(r.size) + "," + format_number(r.log_value) + "," + format_number(r.normalized) +
           "," + (r.count ? std::to_string(*r.count) : "") + "\n";
  }
  out << (cfg.format == "csv" ? csv : j.dump(2) + "\n");
  return refused ? kCapacity : kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  std::vector<const FamilySpec*> specs;
  if (cfg.family.empty()) {
    if (!cfg.params.empty()) throw UsageError("--params needs --family");
    for (const auto& s : family_table()) specs.push_back(&s);
  } else {
    specs.push_back(&find_family(cfg.family));
  }
  FamilyEvalOptions opts;
  opts.quadrature = quadrature_config(cfg);
  opts.permanent = permanent_options(cfg);
  if (!cfg.windows.empty()) opts.window_sizes = parse_sizes(cfg.windows);
  if (!cfg.tori.empty()) opts.torus_sizes = parse_sizes(cfg.tori);
  bool refused = false;
  std::string csv = compare_csv_header() + "\n";
  json j = json::array();
  for (const FamilySpec* spec : specs) {
    const FamilyResult r = example_family_eval(*spec, parse_family_params(*spec, cfg.params), opts);
    refused = refused || r.capacity_errors > 0;
    csv += compare_csv_row(r) + "\n";
    json row{{"family", r.family},
             {"params", r.params},
             {"per_estimate_low", number(r.per_low)},
             {"per_estimate_high", number(r.per_high)},
             {"per_certified", r.per_certified},
             {"det_value", number(r.det_value)},
             {"det_error_estimate", number(r.det_error)},
             {"capacity_errors", r.capacity_errors}};
    if (r.explicit_integral) row["explicit_integral"] = number(r.explicit_integral->value);
    j.push_back(std::move(row));
  }
  out << (cfg.format == "json" ? j.dump(2) + "\n" : csv);
  return refused ? kCapacity : kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> extra;
  if (!cfg.input_path.empty() || !cfg.inline_json.empty()) extra.push_back(element_to_json(load_element(cfg)));
  const auto lines = run_verify_suite(extra);
  std::size_t failed = 0;
  json j = json::array();
  for (const auto& l : lines) {
    if (!l.pass) ++failed;
    if (cfg.format == "json") {
      j.push_back({{"check", l.check}, {"subject", l.subject}, {"pass", l.pass}, {"detail", l.detail}});
    } else {
      out << (l.pass ? "PASS " : "FAIL ") << l.check << " [" << l.subject << "]";
      if (!l.detail.empty()) out << ": " << l.detail;
      out << "\n";
    }
  }
  if (cfg.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << lines.size() - failed << "/" << lines.size() << " checks passed\n";
  }
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permanents of restricted-displacement shifts: estimates, bounds and determinant comparisons", "permsft"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--input", cfg.input_path, "Element JSON file");
  app.add_option("--inline", cfg.inline_json, "Element JSON text, or a JSON array of points for an indicator");
  app.add_option("--dim", cfg.dim, "Lattice dimension for point-list input")->check(CLI::Range(1, 8));
  app.add_option("--windows", cfg.windows, "Box sizes n or n0..n1");
  app.add_option("--window", cfg.window_json, "Explicit window JSON (permanent)");
  app.add_option("--tori", cfg.tori, "Comma list of n1xn2 extents or n0..n1 ranges of cubes");
  app.add_option("--grid", cfg.grid, "Quadrature midpoints per dimension on the coarsest level");
  app.add_option("--levels", cfg.levels, "Quadrature refinement levels");
  app.add_option("--eps", cfg.eps, "Floor on |f| inside the logarithm");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "Cap on worker threads (0 = hardware)");
  app.add_option("--budget", cfg.budget, "Work budget per exact kernel call");
  app.add_option("--backend", cfg.backend, "auto|ryser|backtracking|frontier|inclusion-exclusion");
  app.add_option("--family", cfg.family, "Example family for compare");
  app.add_option("--params", cfg.params, "Family parameters, e.g. a=1;b=2;K=4");
  app.add_flag("--no-iper", cfg.no_iper, "Skip injective permanent rows");
  app.add_flag("--no-mahler", cfg.no_mahler, "Skip the Mahler measure lower value");

  const std::pair<const char*, const char*> commands[] = {
      {"entropy", "Entropy bracket of X_A for the indicator of the support"},
      {"pressure", "Bracket for the permanent of a nonnegative weighted element"},
      {"permanent", "per and iper of f on each window"},
      {"mahler", "Logarithmic Mahler measure by quadrature"},
      {"compare", "Permanent against determinant for the example families"},
      {"periodic", "Torus permanents"},
      {"verify", "Invariant suite on the seed corpus"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&cfg, n = std::string(name)] { cfg.command = n; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (cfg.threads > 0) set_max_threads(cfg.threads);
  if (cfg.format.empty()) cfg.format = cfg.command == "compare" ? "csv" : cfg.command == "verify" ? "text" : "json";
  out.imbue(std::locale::classic());

  try {
    if (cfg.command == "entropy") return cmd_report(cfg, true, out);
    if (cfg.command == "pressure") return cmd_report(cfg, false, out);
    if (cfg.command == "permanent") return cmd_permanent(cfg, out);
    if (cfg.command == "mahler") return cmd_mahler(cfg, out);
    if (cfg.command == "compare") return cmd_compare(cfg, out);
    if (cfg.command == "periodic") return cmd_periodic(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << "error: no command\n";
  return kUsage;
}

}  // namespace permsft::cli

#include "permsft/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>

#include "permsft/error.hpp"
#include "permsft/io.hpp"
#include "permsft/mahler.hpp"
#include "permsft/parallel.hpp"
#include "permsft/transfer.hpp"

namespace permsft {

WindowSchedule::WindowSchedule(std::vector<Window> windows) : windows_(std::move(windows)) {
  if (windows_.empty()) throw InvalidArgument("window schedule must be nonempty");
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    if (windows_[i].empty()) throw InvalidArgument("schedule windows must be nonempty");
    if (i > 0 && windows_[i].size() <= windows_[i - 1].size()) {
      throw InvalidArgument("schedule windows must have strictly increasing size");
    }
  }
}

WindowSchedule WindowSchedule::boxes(std::size_t dim, std::int64_t n_min, std::int64_t n_max) {
  if (n_min < 1 || n_max < n_min) throw InvalidArgument("window range must satisfy 1 <= n_min <= n_max");
  std::vector<Window> w;
  for (std::int64_t n = n_min; n <= n_max; ++n) w.push_back(Window::cube(dim, n));
  return WindowSchedule(std::move(w));
}

std::string_view kind_name(EstimateKind k) {
  switch (k) {
    case EstimateKind::kUpper: return "upper";
    case EstimateKind::kTorus: return "torus";
    case EstimateKind::kTransfer: return "transfer";
    case EstimateKind::kBound: return "bound";
  }
  return "unknown";
}

namespace {

std::string extents_label(const std::vector<std::int64_t>& extents) {
  std::string s;
  for (std::size_t i = 0; i < extents.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(extents[i]);
  }
  return s;
}

EstimateRow capacity_row(std::string window, std::size_t size, EstimateKind kind, std::string quantity) {
  EstimateRow r;
  r.window = std::move(window);
  r.size = size;
  r.log_value = std::numeric_limits<double>::quiet_NaN();
  r.normalized = r.log_value;
  r.kind = kind;
  r.quantity = std::move(quantity);
  r.capacity_exceeded = true;
  return r;
}

EstimateRow value_row(std::string window, std::size_t size, double log_value, EstimateKind kind, std::string quantity) {
  EstimateRow r;
  r.window = std::move(window);
  r.size = size;
  r.log_value = log_value;
  r.normalized = size > 0 ? log_value / static_cast<double>(size) : log_value;
  r.kind = kind;
  r.quantity = std::move(quantity);
  return r;
}

}  // namespace

std::string window_label(const Window& w) {
  if (w.empty()) return "empty";
  const std::size_t d = w.dim();
  std::vector<std::int64_t> lo(w[0].coords().begin(), w[0].coords().end()), hi = lo;
  for (const auto& p : w) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  std::vector<std::int64_t> extents(d);
  std::size_t volume = 1;
  for (std::size_t i = 0; i < d; ++i) {
    extents[i] = hi[i] - lo[i] + 1;
    volume *= static_cast<std::size_t>(extents[i]);
  }
  if (volume == w.size()) return "box " + extents_label(extents);
  return "points " + std::to_string(w.size());
}

std::vector<EstimateRow> upper_estimates(const GroupRingElement& f, const Window& A, const WindowSchedule& schedule,
                                         const PermanentOptions& opts, bool include_iper) {
  const std::size_t per_window = include_iper ? 2 : 1;
  const auto& windows = schedule.windows();
  std::vector<EstimateRow> rows(windows.size() * per_window);
  PermanentOptions o = opts;
  o.integer_mode = opts.integer_mode && f.is_indicator();
  parallel_for(rows.size(), [&](std::size_t k) {
    const Window& F = windows[k / per_window];
    const bool injective_only = k % per_window == 1;
    const std::string quantity = injective_only ? "iper" : "per";
    try {
      const PermanentValue v = injective_only ? iper_AF(f, A, F, o) : per_AF(f, A, F, o);
      rows[k] = value_row(window_label(F), F.size(), v.log(), EstimateKind::kUpper, quantity);
      rows[k].count = v.count;
    } catch (const CapacityError&) {
      rows[k] = capacity_row(window_label(F), F.size(), EstimateKind::kUpper, quantity);
    }
  });
  return rows;
}

GroupRingElement canonical_translate(const GroupRingElement& f) {
  if (f.is_zero()) throw InvalidArgument("translation of the zero element");
  return f.translate(-f.terms().begin()->first);
}

void check_torus_injective(const GroupRingElement& f, const TorusQuotient& q) {
  if (f.dim() != q.dim()) throw InvalidArgument("element dimension does not match torus");
  const Window A = f.support();
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      if (q.is_trivial(A[i] - A[j])) {
        throw InvalidArgument("torus " + extents_label(q.moduli()) + " identifies displacements " + A[i].to_string() +
                              " and " + A[j].to_string());
      }
    }
  }
}

std::vector<EstimateRow> torus_estimates(const GroupRingElement& f, const std::vector<TorusQuotient>& tori,
                                         const PermanentOptions& opts) {
  if (f.is_zero()) throw InvalidArgument("torus estimate of the zero element");
  for (const auto& q : tori) check_torus_injective(f, q);
  const GroupRingElement g = canonical_translate(f);
  PermanentOptions o = opts;
  o.integer_mode = g.is_indicator();
  if (o.backend == Backend::kAuto || o.backend == Backend::kInclusionExclusion) o.backend = Backend::kFrontier;
  std::vector<EstimateRow> rows(tori.size());
  parallel_for(tori.size(), [&](std::size_t k) {
    const TorusQuotient& q = tori[k];
    const std::string label = "torus " + extents_label(q.moduli());
    try {
      const PermanentValue v = matrix_permanent(torus_matrix(g, q), o);
      rows[k] = value_row(label, q.order(), v.log(), EstimateKind::kTorus, "per");
      rows[k].count = v.count;
    } catch (const CapacityError&) {
      rows[k] = capacity_row(label, q.order(), EstimateKind::kTorus, "per");
    }
  });
  return rows;
}

double bound_lower_formula(const GroupRingElement& f) {
  if (f.is_zero()) throw InvalidArgument("lower bound of the zero element");
  return std::log(f.l1_norm()) - 1.0;
}

double bound_upper_formula(std::size_t support_size) {
  if (support_size == 0) throw InvalidArgument("upper bound needs a nonempty support");
  const double n = static_cast<double>(support_size);
  return std::lgamma(n + 1.0) / n;
}

double bound_upper_weighted(const GroupRingElement& f) {
  if (f.is_zero()) throw InvalidArgument("upper bound of the zero element");
  return std::log(f.linf_norm()) + bound_upper_formula(f.size());
}

bool zero_entropy_classifier(const Window& A) {
  if (A.empty()) throw InvalidArgument("classifier needs a nonempty displacement set");
  return A.size() <= 2;
}

EstimateReport estimate_report(const GroupRingElement& f, const Window& A, const WindowSchedule& schedule,
                               const std::vector<TorusQuotient>& tori, const ReportOptions& opts) {
  if (!f.is_nonnegative()) throw InvalidArgument("estimate report needs nonnegative coefficients");
  EstimateReport report;
  auto take_upper = [&](double v) {
    if (std::isnan(v)) return;
    report.certified_upper = report.certified_upper ? std::min(*report.certified_upper, v) : v;
  };

  for (auto& row : upper_estimates(f, A, schedule, opts.permanent, opts.include_iper)) {
    if (row.capacity_exceeded) {
      ++report.capacity_errors;
    } else {
      take_upper(row.normalized);
    }
    report.rows.push_back(std::move(row));
  }

  if (!tori.empty()) {
    for (auto& row : torus_estimates(f, tori, opts.permanent)) {
      if (row.capacity_exceeded) {
        ++report.capacity_errors;
      } else {
        report.torus_lower = report.torus_lower ? std::max(*report.torus_lower, row.normalized) : row.normalized;
      }
      report.rows.push_back(std::move(row));
    }
    report.torus_converging = f.dim() == 1;
  }

  report.bound_lower = bound_lower_formula(f);
  report.bound_upper = bound_upper_weighted(f);
  report.certified_lower = report.bound_lower;
  take_upper(report.bound_upper);
  report.rows.push_back(value_row("lower-formula", 1, report.bound_lower, EstimateKind::kBound, "log(|f|_1/e)"));
  report.rows.push_back(value_row("upper-formula", 1, report.bound_upper, EstimateKind::kBound, "log(|A|!)/|A|"));

  if (f.dim() == 1 && opts.include_transfer) {
    try {
      const TransferMatrix T = TransferMatrix::build(f);
      const double v = perron(T).log_radius;
      report.transfer = v;
      take_upper(v);
      report.certified_lower = std::max(report.certified_lower, v);
      report.rows.push_back(value_row("transfer", 1, v, EstimateKind::kTransfer, "perron"));
    } catch (const CapacityError&) {
      ++report.capacity_errors;
      report.rows.push_back(capacity_row("transfer", 1, EstimateKind::kTransfer, "perron"));
    }
  }

  if (opts.quadrature) {
    const QuadratureResult m = mahler_measure(f, *opts.quadrature);
    report.mahler = m.value;
    report.certified_lower = std::max(report.certified_lower, m.value - m.error_estimate);
    report.rows.push_back(value_row("mahler", 1, m.value, EstimateKind::kBound, "det_fk"));
  }
  return report;
}

namespace {

using nlohmann::json;

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

}  // namespace

std::string report_csv(const EstimateReport& report) {
  std::string out = "window,size,log_value,normalized,kind,quantity\n";
  for (const auto& r : report.rows) {
    out += r.window + "," + std::to_string(r.size) + "," + format_number(r.log_value) + "," +
           format_number(r.normalized) + "," + std::string(kind_name(r.kind)) + "," + r.quantity + "\n";
  }
  return out;
}

std::string report_json(const EstimateReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row{{"window", r.window},     {"size", r.size},
             {"log_value", number(r.log_value)}, {"normalized", number(r.normalized)},
             {"kind", kind_name(r.kind)}, {"quantity", r.quantity}};
    if (r.capacity_exceeded) row["capacity_exceeded"] = true;
    if (r.count) row["count"] = *r.count;
    rows.push_back(std::move(row));
  }
  json j{{"rows", rows},
         {"certified_upper", report.certified_upper ? number(*report.certified_upper) : json(nullptr)},
         {"certified_lower", number(report.certified_lower)},
         {"bound_lower", number(report.bound_lower)},
         {"bound_upper", number(report.bound_upper)},
         {"capacity_errors", report.capacity_errors}};
  if (report.torus_lower) {
    j["torus_lower"] = number(*report.torus_lower);
    j["torus_lower_label"] = report.torus_converging ? "converging-lower" : "heuristic-lower";
  }
  if (report.transfer) j["transfer"] = number(*report.transfer);
  if (report.mahler) j["mahler"] = number(*report.mahler);
  return j.dump(2);
}

}  // namespace permsft

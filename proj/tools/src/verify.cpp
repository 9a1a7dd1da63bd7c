#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cli.hpp"
#include "permsft/determinant.hpp"
#include "permsft/entropy.hpp"
#include "permsft/error.hpp"
#include "permsft/io.hpp"
#include "permsft/permanent.hpp"
#include "permsft/transfer.hpp"

namespace permsft::cli {

namespace {

constexpr double kIdentityRel = 1e-9;
constexpr double kBackendRel = 1e-10;
constexpr double kInequalityRel = 1e-12;
constexpr double kScalingAbs = 1e-12;
constexpr double kTraceRel = 1e-10;
constexpr double kAdjointAbs = 1e-6;

struct Subject {
  std::string name;
  GroupRingElement f;
};

GroupRingElement element(std::size_t dim, std::vector<std::pair<LatticePoint, double>> terms) {
  return GroupRingElement(dim, std::move(terms));
}

std::vector<Subject> seed_corpus() {
  using P = LatticePoint;
  return {
      {"golden", element(1, {{P{0}, 1}, {P{1}, 1}, {P{2}, 1}})},
      {"two-point", element(1, {{P{0}, 1}, {P{1}, 1}})},
      {"symmetric", element(1, {{P{-1}, 1}, {P{0}, 1}, {P{1}, 1}})},
      {"weighted", element(1, {{P{0}, 2}, {P{1}, 0.5}, {P{3}, 1}})},
      {"signed", element(1, {{P{0}, 1}, {P{1}, -2}, {P{2}, 0.5}})},
      {"plane", element(2, {{P{0, 0}, 1}, {P{1, 0}, 1}, {P{0, 1}, 1}})},
      {"dimer", element(2, {{P{-1, 0}, 1}, {P{1, 0}, 1}, {P{0, -1}, 1}, {P{0, 1}, 1}})},
      {"signed-plane", element(2, {{P{0, 0}, 1}, {P{1, 0}, -1}, {P{0, 1}, 0.5}})},
  };
}

std::vector<Window> windows_for(std::size_t dim) {
  using P = LatticePoint;
  std::vector<Window> out;
  if (dim == 1) {
    for (std::int64_t n = 1; n <= 6; ++n) out.push_back(Window::cube(1, n));
    out.push_back(Window::from_points({P{0}, P{2}, P{3}}));
  } else if (dim == 2) {
    out.push_back(Window::cube(2, 2));
    const std::int64_t lengths[] = {2, 3};
    out.push_back(Window::box(P{0, 0}, lengths));
    out.push_back(Window::from_points({P{0, 0}, P{1, 1}, P{2, 0}}));
  } else {
    out.push_back(Window::cube(dim, 2));
  }
  return out;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel_gap(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

bool le_rel(double lhs, double rhs, double rel) {
  if (std::isinf(lhs) && lhs < 0) return true;
  return lhs <= rhs + rel * std::max(1.0, std::fabs(rhs));
}

/// Runs fn, turning a returned message or a thrown error into a failing line.
VerifyLine check(const std::string& name, const Subject& s, const std::function<std::string()>& fn) {
  VerifyLine line{name, s.name, true, ""};
  try {
    line.detail = fn();
    line.pass = line.detail.empty();
  } catch (const std::exception& e) {
    line.pass = false;
    line.detail = e.what();
  }
  return line;
}

void checks_for(const Subject& s, std::vector<VerifyLine>& out) {
  const GroupRingElement& f = s.f;
  const GroupRingElement g = f.abs();
  const Window A = f.support();
  const auto windows = windows_for(f.dim());

  out.push_back(check("det-identity", s, [&]() -> std::string {
    for (const Window& F : windows) {
      const DetIdentity id = det_in_IA_check(f, F);
      const double gap = rel_gap(id.lhs, id.rhs);
      if (gap > kIdentityRel) return window_label(F) + ": gap " + fmt(gap);
    }
    return "";
  }));

  out.push_back(check("per-ge-det", s, [&]() -> std::string {
    for (const Window& F : windows) {
      const double det = finite_det_ffstar(f, F);
      const double iper = iper_AF(g, A, F).linear();
      if (!le_rel(det, iper * iper, kIdentityRel)) return window_label(F) + ": det " + fmt(det) + " > " + fmt(iper * iper);
    }
    return "";
  }));

  out.push_back(check("backend-agreement", s, [&]() -> std::string {
    const Backend backends[] = {Backend::kRyser, Backend::kBacktracking, Backend::kFrontier, Backend::kInclusionExclusion};
    for (const Window& F : windows) {
      for (const bool admissible : {true, false}) {
        double reference = 0;
        bool first = true;
        for (Backend b : backends) {
          PermanentOptions o;
          o.backend = b;
          const double v = (admissible ? per_AF(g, A, F, o) : iper_AF(g, A, F, o)).linear();
          if (first) {
            reference = v;
            first = false;
          } else if (rel_gap(v, reference) > kBackendRel) {
            return window_label(F) + ": " + std::string(backend_name(b)) + " gives " + fmt(v) + ", expected " + fmt(reference);
          }
        }
      }
    }
    return "";
  }));

  out.push_back(check("translation", s, [&]() -> std::string {
    LatticePoint shift = LatticePoint::zero(f.dim());
    std::vector<std::int64_t> c(f.dim(), 3);
    c.front() = -5;
    shift = LatticePoint(c);
    const GroupRingElement moved = g.translate(shift);
    for (const Window& F : windows) {
      const double base = per_AF(g, A, F).log();
      if (per_AF(g, A, F.translated(shift)).log() != base) return window_label(F) + ": window translate changes per";
      if (per_AF(moved, moved.support(), F).log() != base) return window_label(F) + ": element translate changes per";
    }
    return "";
  }));

  out.push_back(check("scaling", s, [&]() -> std::string {
    const double C = 2.5;
    for (const Window& F : windows) {
      const double a = per_AF(g, A, F).log();
      const double b = per_AF(g.scaled(C), A, F).log();
      if (std::isinf(a)) {
        if (!std::isinf(b)) return window_label(F) + ": scaling creates mass";
        continue;
      }
      const double expected = a + static_cast<double>(F.size()) * std::log(C);
      if (std::fabs(b - expected) > kScalingAbs * std::max(1.0, std::fabs(expected))) {
        return window_label(F) + ": shift off by " + fmt(b - expected);
      }
    }
    return "";
  }));

  out.push_back(check("monotonicity", s, [&]() -> std::string {
    std::vector<std::pair<LatticePoint, double>> terms;
    bool first = true;
    for (const auto& [p, c] : g.terms()) {
      terms.emplace_back(p, first ? c * 0.5 : c);
      first = false;
    }
    const GroupRingElement smaller(g.dim(), terms);
    for (const Window& F : windows) {
      if (!le_rel(per_AF(smaller, A, F).log(), per_AF(g, A, F).log(), kInequalityRel)) {
        return window_label(F) + ": lowering a weight raised per";
      }
    }
    return "";
  }));

  out.push_back(check("subadditivity", s, [&]() -> std::string {
    const double log_min = std::log(g.min_positive());
    auto normalized = [&](const Window& W) {
      return per_AF(g, A, W).log() - static_cast<double>(W.size()) * log_min;
    };
    for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
      const Window& F1 = windows[i];
      const Window F2 = windows[i + 1].translated(windows[i + 1].points().front());
      const Window U = set_union(F1, F2);
      if (!le_rel(normalized(U), normalized(F1) + normalized(F2), kInequalityRel)) {
        return window_label(F1) + " u " + window_label(F2) + ": union inequality fails";
      }
    }
    return "";
  }));

  if (f.dim() != 1) return;

  out.push_back(check("bound-sandwich", s, [&]() -> std::string {
    const double p = transfer_pressure_Z(g);
    if (!le_rel(bound_lower_formula(g), p, kInequalityRel)) return "lower formula above transfer value " + fmt(p);
    if (!le_rel(p, bound_upper_weighted(g), kInequalityRel)) return "transfer value " + fmt(p) + " above upper formula";
    for (const auto& row : upper_estimates(g, A, WindowSchedule::boxes(1, 1, 8))) {
      if (!le_rel(p, row.normalized, 1e-9)) return row.window + " " + row.quantity + " below transfer value";
    }
    return "";
  }));

  out.push_back(check("torus-trace", s, [&]() -> std::string {
    const GroupRingElement h = canonical_translate(g);
    const TransferMatrix T = TransferMatrix::build(h);
    const auto first = static_cast<std::int64_t>(2 * T.span() + 2);
    for (std::int64_t n = first; n < first + 4; ++n) {
      const double torus = matrix_permanent(torus_matrix(h, TorusQuotient({n}))).log();
      const double trace = trace_power(T, static_cast<std::size_t>(n)).log();
      if (rel_gap(trace, torus) > kTraceRel) return "n=" + std::to_string(n) + ": trace " + fmt(trace) + " vs " + fmt(torus);
    }
    return "";
  }));

  out.push_back(check("adjoint", s, [&]() -> std::string {
    const double a = transfer_pressure_Z(g);
    const double b = transfer_pressure_Z(g.adjoint());
    if (std::fabs(a - b) > kAdjointAbs) return "per(f) " + fmt(a) + " vs per(f*) " + fmt(b);
    return "";
  }));
}

}  // namespace

std::vector<VerifyLine> run_verify_suite(const std::vector<std::string>& extra_elements) {
  std::vector<Subject> subjects = seed_corpus();
  for (std::size_t i = 0; i < extra_elements.size(); ++i) {
    subjects.push_back({"input" + (extra_elements.size() > 1 ? std::to_string(i + 1) : std::string()),
                        parse_element(extra_elements[i])});
  }
  std::vector<VerifyLine> out;
  for (const auto& s : subjects) checks_for(s, out);
  return out;
}

}  // namespace permsft::cli

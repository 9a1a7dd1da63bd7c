#include "permsft/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permsft/determinant.hpp"
#include "permsft/error.hpp"
#include "permsft/io.hpp"
#include "permsft/patterns.hpp"
#include "permsft/permanent.hpp"
#include "permsft/transfer.hpp"

namespace permsft {

std::vector<PerVsDetRow> per_vs_det_report(const GroupRingElement& f, const WindowSchedule& schedule,
                                           const PermanentOptions& opts) {
  const GroupRingElement g = f.abs();
  const Window A = g.support();
  std::vector<PerVsDetRow> rows;
  for (const Window& F : schedule.windows()) {
    PerVsDetRow row;
    row.window = window_label(F);
    row.size = F.size();
    const double n = static_cast<double>(F.size());
    const double logdet = finite_logdet_ffstar(f, F);
    row.det_normalized = logdet / (2.0 * n);
    try {
      const double log_iper = iper_AF(g, A, F, opts).log();
      row.iper_normalized = log_iper / n;
      row.inequality_holds = logdet <= 2.0 * log_iper + 1e-9;
    } catch (const CapacityError&) {
      row.iper_normalized = std::numeric_limits<double>::quiet_NaN();
      row.capacity_exceeded = true;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string_view sign_status_name(SignStatus s) {
  switch (s) {
    case SignStatus::kConstant: return "constant";
    case SignStatus::kMixed: return "mixed";
    case SignStatus::kVacuous: return "vacuous";
  }
  return "unknown";
}

SignProbe constant_sign_probe(const GroupRingElement& f, const Window& F, const Window& image) {
  const PatternSpace space(f.support(), F);
  std::vector<double> coef(space.choices());
  for (std::size_t k = 0; k < space.choices(); ++k) coef[k] = f.coef(space.displacements()[k]);
  SignProbe probe;
  std::vector<std::size_t> targets(F.size());
  for_each_with_image(space, image, [&](std::span<const std::size_t> choice) {
    double term = 1;
    for (std::size_t i = 0; i < choice.size(); ++i) {
      term *= coef[choice[i]];
      targets[i] = space.target(i, choice[i]);
    }
    term *= choice_sign(targets);
    if (term > 0) {
      ++probe.positive;
    } else if (term < 0) {
      ++probe.negative;
    } else {
      ++probe.zero;
    }
  });
  if (probe.positive + probe.negative == 0) {
    probe.status = SignStatus::kVacuous;
  } else {
    probe.status = probe.positive > 0 && probe.negative > 0 ? SignStatus::kMixed : SignStatus::kConstant;
  }
  return probe;
}

const std::vector<FamilySpec>& family_table() {
  static const std::vector<FamilySpec> table{
      {"quad-Z2",
       2,
       {"a", "b", "c", "d"},
       0,
       DetCombine::kEqual,
       {{{0, 0}, {0, 0}, 0, {1, 1, 1}},
        {{1, 0}, {0, 0}, 1, {1, -1, 1}},
        {{0, 1}, {0, 0}, 2, {1, 1, 1}},
        {{1, 1}, {0, 0}, 3, {1, 1, -1}}}},
      {"dimer",
       2,
       {"a", "b"},
       0,
       DetCombine::kEqual,
       {{{-1, 0}, {0, 0}, 0, {1, 1, 1}},
        {{0, 1}, {0, 0}, 1, {1, 1, -1}},
        {{0, -1}, {0, 0}, 1, {1, 1, 1}},
        {{1, 0}, {0, 0}, 0, {1, -1, 1}}}},
      {"affine-Z2",
       2,
       {"a", "b", "c"},
       0,
       DetCombine::kEqual,
       {{{0, 0}, {0, 0}, 0, {1, 1}}, {{1, 0}, {0, 0}, 1, {1, 1}}, {{0, 1}, {0, 0}, 2, {1, 1}}}},
      {"trinomial-Z",
       1,
       {"a", "b", "c"},
       0,
       DetCombine::kEqual,
       {{{2}, {0}, 0, {1, 1}}, {{1}, {0}, 1, {1, 1}}, {{0}, {0}, 2, {1, -1}}}},
      {"three-point-Z",
       1,
       {"a", "b", "c"},
       2,
       DetCombine::kMax,
       {{{0}, {1}, 0, {1, 1, 1}}, {{-1}, {1}, 1, {1, 1, 1}}, {{0}, {0}, 2, {1, -1, 1}}}},
      {"four-point-Z",
       1,
       {"a", "b", "c", "d"},
       3,
       DetCombine::kMax,
       {{{0}, {1}, 0, {1, 1, 1}}, {{-1}, {1}, 1, {1, 1, 1}}, {{1}, {0}, 2, {1, 1, -1}}, {{0}, {0}, 3, {1, -1, 1}}}},
  };
  return table;
}

const FamilySpec& find_family(std::string_view name) {
  for (const auto& spec : family_table()) {
    if (spec.name == name) return spec;
  }
  std::string known;
  for (const auto& spec : family_table()) known += (known.empty() ? "" : ", ") + spec.name;
  throw InvalidArgument("unknown family '" + std::string(name) + "' (known: " + known + ")");
}

namespace {

void check_params(const FamilySpec& spec, const FamilyParams& params) {
  if (params.values.size() != spec.param_names.size()) {
    throw InvalidArgument("family " + spec.name + " takes " + std::to_string(spec.param_names.size()) + " parameters");
  }
  for (double v : params.values) {
    if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument("family parameters must be positive");
  }
  if (spec.min_k > 0 && params.k < spec.min_k) {
    throw InvalidArgument("family " + spec.name + " needs K >= " + std::to_string(spec.min_k));
  }
}

GroupRingElement build(const FamilySpec& spec, const FamilyParams& params, std::size_t sign_column) {
  check_params(spec, params);
  std::vector<std::pair<LatticePoint, double>> terms;
  for (const auto& t : spec.terms) {
    std::vector<std::int64_t> e(spec.dim);
    for (std::size_t i = 0; i < spec.dim; ++i) e[i] = t.base[i] + static_cast<std::int64_t>(t.k_multiple[i]) * params.k;
    terms.emplace_back(LatticePoint(std::move(e)), t.signs[sign_column] * params.values[t.param]);
  }
  return GroupRingElement(spec.dim, std::move(terms));
}

}  // namespace

GroupRingElement family_element(const FamilySpec& spec, const FamilyParams& params) { return build(spec, params, 0); }

GroupRingElement family_representative(const FamilySpec& spec, const FamilyParams& params, std::size_t r) {
  if (r >= spec.representatives()) throw InvalidArgument("representative index out of range");
  return build(spec, params, r + 1);
}

std::string format_params(const FamilySpec& spec, const FamilyParams& params) {
  std::string s;
  for (std::size_t i = 0; i < spec.param_names.size() && i < params.values.size(); ++i) {
    if (i) s += ";";
    s += spec.param_names[i] + "=" + format_number(params.values[i]);
  }
  if (spec.min_k > 0) s += ";K=" + std::to_string(params.k);
  return s;
}

FamilyResult example_family_eval(const FamilySpec& spec, const FamilyParams& params, const FamilyEvalOptions& opts) {
  const GroupRingElement h = family_element(spec, params);
  FamilyResult out;
  out.family = spec.name;
  out.params = format_params(spec, params);

  for (std::size_t r = 0; r < spec.representatives(); ++r) {
    out.det_sides.push_back(mahler_measure(family_representative(spec, params, r), opts.quadrature));
  }
  if (spec.combine == DetCombine::kMax) {
    const auto best = std::max_element(out.det_sides.begin(), out.det_sides.end(),
                                       [](const auto& x, const auto& y) { return x.value < y.value; });
    out.det_value = best->value;
    out.det_error = best->error_estimate;
  } else {
    out.det_value = out.det_sides.front().value;
    out.det_error = out.det_sides.front().error_estimate;
  }
  if (spec.name == "dimer") {
    out.explicit_integral = dimer_integral(params.values[0], params.values[1], opts.quadrature);
  }

  if (spec.dim == 1) {
    const double v = transfer_pressure_Z(h);
    out.per_low = out.per_high = v;
    out.per_certified = true;
    return out;
  }

  const Window A = h.support();
  std::vector<Window> windows;
  for (auto n : opts.window_sizes) windows.push_back(Window::cube(spec.dim, n));
  std::optional<double> high;
  for (const auto& row : upper_estimates(h, A, WindowSchedule(std::move(windows)), opts.permanent, true)) {
    if (row.capacity_exceeded) {
      ++out.capacity_errors;
      continue;
    }
    high = high ? std::min(*high, row.normalized) : row.normalized;
  }
  std::vector<TorusQuotient> tori;
  for (auto n : opts.torus_sizes) tori.emplace_back(std::vector<std::int64_t>(spec.dim, n));
  std::optional<double> low;
  if (!tori.empty()) {
    for (const auto& row : torus_estimates(h, tori, opts.permanent)) {
      if (row.capacity_exceeded) {
        ++out.capacity_errors;
        continue;
      }
      low = low ? std::max(*low, row.normalized) : row.normalized;
    }
  }
  out.per_high = high.value_or(std::numeric_limits<double>::quiet_NaN());
  out.per_low = low.value_or(std::numeric_limits<double>::quiet_NaN());
  return out;
}

std::string compare_csv_header() { return "family,params,per_estimate_low,per_estimate_high,det_value,det_error_estimate"; }

std::string compare_csv_row(const FamilyResult& r) {
  return r.family + "," + r.params + "," + format_number(r.per_low) + "," + format_number(r.per_high) + "," +
         format_number(r.det_value) + "," + format_number(r.det_error);
}

}  // namespace permsft

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "permsft/determinant.hpp"
#include "permsft/entropy.hpp"
#include "permsft/families.hpp"
#include "permsft/mahler.hpp"
#include "permsft/permanent.hpp"
#include "permsft/transfer.hpp"

using namespace permsft;

namespace {

// Pinned tolerances.
constexpr double kDetIdentityRel = 1e-9;
constexpr double kBackendRel = 1e-10;
constexpr double kInequalityRel = 1e-12;
constexpr double kGoldenAgreement = 1e-3;
constexpr double kGoldenReference = 0.481212;
constexpr double kGoldenReferenceTol = 1e-6;
constexpr double kTorusWithin = 0.05;
constexpr double kZeroPressure = 1e-12;
constexpr double kSandwichSlack = 1e-12;
constexpr double kDimerTorusSlack = 0.15;
constexpr double kPerGeDetRel = 1e-9;
constexpr double kScalingAbs = 1e-12;
constexpr double kTransferIdentity = 1e-6;
constexpr double kDetIdentitySeconds = 60;
// Ryser with required columns runs one full Ryser sweep per inclusion-exclusion term.
constexpr double kOracleBudget = 1e11;
constexpr double kDimerSeconds = 600;
constexpr double kDimerBudget = 1e10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Window line(std::initializer_list<std::int64_t> xs) {
  std::vector<LatticePoint> p;
  for (auto x : xs) p.push_back(LatticePoint{x});
  return Window::from_points(p);
}

GroupRingElement weights_on(std::mt19937_64& rng, const Window& A, double lo, double hi) {
  std::uniform_real_distribution<double> w(lo, hi);
  std::vector<std::pair<LatticePoint, double>> t;
  for (const auto& a : A) t.emplace_back(a, w(rng));
  return GroupRingElement(A.dim(), t);
}

bool le_rel(double lhs, double rhs, double rel) {
  if (std::isinf(rhs) && rhs < 0) return std::isinf(lhs) && lhs < 0;
  return lhs <= rhs + rel * std::max(1.0, std::fabs(rhs));
}

struct SignedInstance {
  GroupRingElement f;
  Window F;
};

std::vector<SignedInstance> signed_instances() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> terms(1, 3), size(1, 8);
  std::vector<SignedInstance> out;
  for (int k = 0; k < 250; ++k) {
    const std::size_t dim = k < 200 ? 1 : 2;
    const Window A = oracle::random_window(rng, dim, static_cast<std::size_t>(terms(rng)), dim == 1 ? 4 : 2);
    std::vector<std::pair<LatticePoint, double>> t;
    for (const auto& a : A) {
      double c = coef(rng);
      if (c == 0) c = 1;
      t.emplace_back(a, c);
    }
    out.push_back({GroupRingElement(dim, t), oracle::random_window(rng, dim, static_cast<std::size_t>(size(rng)), 3)});
  }
  return out;
}

// 1
Outcome det_identity() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (const auto& [f, F] : signed_instances()) {
    const DetIdentity id = det_in_IA_check(f, F);
    const double err = std::fabs(id.lhs - id.rhs) / std::max(1.0, std::fabs(id.lhs));
    worst = std::max(worst, err);
    if (err > kDetIdentityRel) fail(o, "identity off by " + fmt(err) + " on |F|=" + std::to_string(F.size()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= kDetIdentitySeconds) fail(o, "took " + fmt(secs) + " s");
  if (o.pass) o.detail = "250 instances, worst relative gap " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

// 2
Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(7);
  const Backend kernels[] = {Backend::kRyser, Backend::kInclusionExclusion, Backend::kBacktracking, Backend::kFrontier};
  std::size_t instances = 0;
  double worst = 0;
  for (int k = 0; k < 400 && instances < 200; ++k) {
    const std::size_t dim = k % 3 == 0 ? 2 : 1;
    const Window A = oracle::random_window(rng, dim, 1 + k % 4, 2);
    const Window F = oracle::random_window(rng, dim, 2 + k % 9, dim == 1 ? 5 : 3);
    if (std::pow(static_cast<double>(A.size()), static_cast<double>(F.size())) > 1e6) continue;
    ++instances;
    const auto ind = GroupRingElement::indicator(A);
    const auto wf = weights_on(rng, A, 0.1, 3.0);
    for (bool interior_rule : {false, true}) {
      const auto naive = oracle::naive_filter(ind, A, F, interior_rule);
      const auto naive_w = oracle::naive_filter(wf, A, F, interior_rule);
      for (Backend b : kernels) {
        PermanentOptions opts;
        opts.backend = b;
        opts.budget = kOracleBudget;
        opts.integer_mode = true;
        const auto c = interior_rule ? per_AF(ind, A, F, opts) : iper_AF(ind, A, F, opts);
        if (!c.count || *c.count != naive.count) {
          fail(o, std::string(backend_name(b)) + " count differs from filter oracle");
        }
        opts.integer_mode = false;
        const auto v = interior_rule ? per_AF(wf, A, F, opts) : iper_AF(wf, A, F, opts);
        const double ref = static_cast<double>(naive_w.weight);
        const double err = ref == 0 ? (v.value.is_zero() ? 0.0 : 1.0) : std::fabs(v.linear() - ref) / ref;
        worst = std::max(worst, err);
        if (err > kBackendRel) fail(o, std::string(backend_name(b)) + " weighted value off by " + fmt(err));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(instances) + " instances x 4 backends, worst weighted gap " + fmt(worst);
  return o;
}

// 3
Outcome subadditivity() {
  Outcome o;
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const std::size_t dim = k % 2 ? 2 : 1;
    const Window A = oracle::random_window(rng, dim, 1 + k % 4, 2);
    const auto f = weights_on(rng, A, 0.2, 3.0);
    const auto g = weights_on(rng, A, 0.2, 3.0);
    const Window F1 = oracle::random_window(rng, dim, 1 + k % 6, 3);
    const Window F2 = oracle::random_window(rng, dim, 1 + (k / 6) % 6, 3);
    const Window U = set_union(F1, F2);
    const double lk = std::log(f.min_positive());
    auto n = [&](double lg, const Window& W) { return lg - static_cast<double>(W.size()) * lk; };
    for (bool interior_rule : {false, true}) {
      auto val = [&](const GroupRingElement& h, const Window& W) {
        return interior_rule ? per_AF(h, A, W).log() : iper_AF(h, A, W).log();
      };
      if (!le_rel(n(val(f, U), U), n(val(f, F1), F1) + n(val(f, F2), F2), kInequalityRel)) {
        fail(o, std::string(interior_rule ? "per" : "iper") + " union inequality fails at instance " +
                    std::to_string(k));
      }
      if (!le_rel(val(pointwise(f, g), F1), val(f, F1) + val(g, F1), kInequalityRel)) {
        fail(o, std::string(interior_rule ? "per" : "iper") + " product inequality fails at instance " +
                    std::to_string(k));
      }
    }
  }
  if (o.pass) o.detail = "500 instances, union and pointwise-product inequalities for per and iper";
  return o;
}

// 4
Outcome golden_family() {
  Outcome o;
  const auto h = GroupRingElement::indicator(line({0, 1, 2}));
  const GroupRingElement r(1, {{LatticePoint{2}, 1.0}, {LatticePoint{1}, 1.0}, {LatticePoint{0}, -1.0}});
  const double transfer = transfer_pressure_Z(h);
  const double mahler = mahler_measure(r).value;
  if (std::fabs(transfer - mahler) > kGoldenAgreement) fail(o, "transfer and Mahler differ by " + fmt(transfer - mahler));
  if (std::fabs(transfer - kGoldenReference) > kGoldenReferenceTol) fail(o, "transfer value " + fmt(transfer));
  if (std::fabs(mahler - kGoldenReference) > kGoldenReferenceTol) fail(o, "Mahler value " + fmt(mahler));
  for (const auto& row : upper_estimates(h, h.support(), WindowSchedule::boxes(1, 12, 12))) {
    if (row.capacity_exceeded || !(row.normalized > transfer)) fail(o, row.quantity + " window estimate at n=12 too low");
  }
  // Tori with n > 2K + 1, where torus counts equal trace(T^n) of the transfer matrix.
  const auto first = static_cast<std::int64_t>(2 * TransferMatrix::build(h).span() + 2);
  std::vector<TorusQuotient> tori;
  for (std::int64_t n = first; n <= 14; ++n) tori.emplace_back(std::vector<std::int64_t>{n});
  double best = -INFINITY;
  for (const auto& row : torus_estimates(h, tori)) best = std::max(best, row.normalized);
  if (std::fabs(best - transfer) > kTorusWithin) fail(o, "best torus estimate " + fmt(best));
  if (o.pass) {
    o.detail = "transfer " + fmt(transfer) + ", Mahler " + fmt(mahler) + ", best torus n=" + std::to_string(first) +
               "..14 " + fmt(best);
  }
  return o;
}

// 5
Outcome zero_entropy() {
  Outcome o;
  const auto h = GroupRingElement::indicator(line({0, 1}));
  std::vector<TorusQuotient> tori;
  for (std::int64_t n = 4; n <= 12; ++n) tori.emplace_back(std::vector<std::int64_t>{n});
  PermanentOptions torus_opts;
  torus_opts.budget = kDimerBudget;
  for (const auto& row : torus_estimates(h, tori, torus_opts)) {
    if (!row.count || *row.count != 2) fail(o, row.window + " count is not 2");
  }
  const double p = transfer_pressure_Z(h);
  if (std::fabs(p) > kZeroPressure) fail(o, "transfer pressure " + fmt(p));
  if (o.pass) o.detail = "torus counts 2 for n=4..12, transfer pressure " + fmt(p);
  return o;
}

// 6
Outcome bound_sandwich() {
  Outcome o;
  std::size_t sets = 0;
  for (unsigned mask = 1; mask < (1u << 7); ++mask) {
    std::vector<std::pair<LatticePoint, double>> t;
    for (int i = 0; i < 7; ++i) {
      if (mask & (1u << i)) t.emplace_back(LatticePoint{i}, 1.0);
    }
    if (t.size() > 5) continue;
    ++sets;
    const GroupRingElement f(1, t);
    const double p = transfer_pressure_Z(f);
    const double lo = bound_lower_formula(f), hi = bound_upper_formula(t.size());
    if (!(lo <= p + kSandwichSlack) || !(p <= hi + kSandwichSlack)) fail(o, "sandwich fails for mask " + std::to_string(mask));
    if (t.size() >= 3 && !(lo < p)) fail(o, "strict lower bound fails for mask " + std::to_string(mask));
  }
  if (o.pass) o.detail = std::to_string(sets) + " displacement sets";
  return o;
}

// 7
Outcome dimer_bracket() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto& spec = find_family("dimer");
  const auto h = family_element(spec, {{1.0, 1.0}, 0});
  const QuadratureResult q = dimer_integral(1.0, 1.0);
  double upper = INFINITY;
  for (const auto& row : upper_estimates(h, h.support(), WindowSchedule({Window::cube(2, 6)}))) {
    if (row.capacity_exceeded) {
      fail(o, "6x6 " + row.quantity + " window refused");
      continue;
    }
    upper = std::min(upper, row.normalized);
    if (!(q.value < row.normalized)) fail(o, "integral not below 6x6 " + row.quantity + " estimate");
  }
  std::vector<TorusQuotient> tori;
  for (std::int64_t n = 3; n <= 8; ++n) tori.emplace_back(std::vector<std::int64_t>{n, n});
  double best = -INFINITY;
  std::string best_label;
  PermanentOptions torus_opts;
  torus_opts.budget = kDimerBudget;
  for (const auto& row : torus_estimates(h, tori, torus_opts)) {
    if (row.capacity_exceeded) {
      fail(o, row.window + " refused");
      continue;
    }
    if (row.normalized > best) best = row.normalized, best_label = row.window;
  }
  if (!(q.value > best - kDimerTorusSlack)) fail(o, "integral below best torus minus slack");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= kDimerSeconds) fail(o, "took " + fmt(secs) + " s");
  if (o.pass) {
    o.detail = "integral " + fmt(q.value) + " in [" + fmt(best) + " - 0.15 (" + best_label + "), " + fmt(upper) + "], " +
               fmt(secs) + " s";
  }
  return o;
}

// 8
Outcome per_ge_det() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& [f, F] : signed_instances()) {
    const double det = finite_det_ffstar(f, F);
    const double iper = iper_AF(f.abs(), f.support(), F).linear();
    if (!(det <= iper * iper * (1 + kPerGeDetRel) + kPerGeDetRel)) fail(o, "det exceeds iper^2 on |F|=" + std::to_string(F.size()));
    ++n;
  }
  if (o.pass) o.detail = std::to_string(n) + " instances";
  return o;
}

// 9
Outcome classical_bounds() {
  Outcome o;
  std::mt19937_64 rng(99);
  double min_ratio = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = k % 2 ? 2 : 1;
    const Window A = oracle::random_window(rng, dim, 1 + k % 3, 2);
    const Window F = oracle::random_window(rng, dim, 1 + k % 4, 2);
    auto f = weights_on(rng, A, 0.1, 1.0);
    f = f.scaled(1.0 / f.l1_norm());
    if (std::fabs(f.l1_norm() - 1.0) > 1e-12) {
      const auto first = f.terms().begin()->first;
      f = f + GroupRingElement::monomial(first, 1.0 - f.l1_norm());
    }
    const DenseMatrix C = doubly_stochastic_extension(f, A, F);
    const double per = dense_permanent(C).linear();
    const double bound = vdw_bound(C.rows);
    min_ratio = std::min(min_ratio, per / bound);
    if (!(per >= bound * (1 - kInequalityRel))) fail(o, "van der Waerden fails at instance " + std::to_string(k));
  }
  std::bernoulli_distribution bit(0.5);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 8;
    DenseMatrix B(n, n);
    for (auto& v : B.data) v = bit(rng) ? 1.0 : 0.0;
    PermanentOptions opts;
    opts.integer_mode = true;
    const auto exact = matrix_permanent(WeightedBipartite::from_dense(B), opts);
    if (*exact.count != static_cast<std::uint64_t>(oracle::factorial_permanent(B))) fail(o, "exact permanent mismatch");
    if (!(static_cast<double>(*exact.count) <= bregman_bound(B) * (1 + kInequalityRel))) {
      fail(o, "Bregman bound fails at instance " + std::to_string(k));
    }
  }
  if (o.pass) o.detail = "100 extensions (min per/bound " + fmt(min_ratio) + "), 100 0-1 matrices";
  return o;
}

// 10
Outcome invariance() {
  Outcome o;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 60; ++k) {
    const std::size_t dim = k % 2 ? 2 : 1;
    const Window A = oracle::random_window(rng, dim, 1 + k % 4, 2);
    const auto f = weights_on(rng, A, 0.2, 2.0);
    const Window F = oracle::random_window(rng, dim, 2 + k % 7, 3);
    std::vector<std::int64_t> sv(dim);
    for (auto& c : sv) c = static_cast<std::int64_t>(k % 5) - 2;
    const LatticePoint s(sv);
    for (bool interior_rule : {false, true}) {
      auto val = [&](const GroupRingElement& h, const Window& AA, const Window& W) {
        return interior_rule ? per_AF(h, AA, W).log() : iper_AF(h, AA, W).log();
      };
      const double base = val(f, A, F);
      if (val(f.translate(s), A.translated(s), F) != base) fail(o, "displacement translation changed a value");
      if (val(f, A, F.translated(s)) != base) fail(o, "window translation changed a value");
      const double C = 0.25 + 0.5 * (k % 7);
      const double scaled = val(f.scaled(C), A, F);
      const double expect = base + static_cast<double>(F.size()) * std::log(C);
      if (!(std::fabs(scaled - expect) <= kScalingAbs * std::max(1.0, std::fabs(expect)))) {
        fail(o, "scaling off by " + fmt(scaled - expect));
      }
      std::vector<std::pair<LatticePoint, double>> bigger;
      for (const auto& [a, c] : f.terms()) bigger.emplace_back(a, c + 0.5);
      if (!(base <= val(GroupRingElement(dim, bigger), A, F))) fail(o, "monotonicity fails");
    }
  }
  double worst_adj = 0, worst_prod = INFINITY;
  for (int k = 0; k < 20; ++k) {
    const auto f = oracle::random_element(rng, 1, 3, 2, 0.2, 2.0);
    const auto g = oracle::random_element(rng, 1, 3, 2, 0.2, 2.0);
    const double pf = transfer_pressure_Z(f), pg = transfer_pressure_Z(g);
    const double adj = std::fabs(pf - transfer_pressure_Z(f.adjoint()));
    const double prod = transfer_pressure_Z(convolve(f, g)) - pf - pg;
    worst_adj = std::max(worst_adj, adj);
    worst_prod = std::min(worst_prod, prod);
    if (adj > kTransferIdentity) fail(o, "adjoint changes pressure by " + fmt(adj));
    if (prod < -kTransferIdentity) fail(o, "product inequality fails by " + fmt(prod));
  }
  if (o.pass) {
    o.detail = "60 window instances; 20 pairs, adjoint gap " + fmt(worst_adj) + ", product margin " + fmt(worst_prod);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"det-in-IA identity", det_identity},
      {"oracle equivalence", oracle_equivalence},
      {"subadditivity and product inequalities", subadditivity},
      {"golden-ratio family", golden_family},
      {"zero-entropy family", zero_entropy},
      {"bound sandwich", bound_sandwich},
      {"dimer bracket", dimer_bracket},
      {"per >= det on windows", per_ge_det},
      {"classical permanent bounds", classical_bounds},
      {"invariance suite", invariance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

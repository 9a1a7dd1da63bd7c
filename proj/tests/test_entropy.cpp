#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "permsft/entropy.hpp"
#include "permsft/error.hpp"
#include "permsft/mahler.hpp"
#include "permsft/parallel.hpp"
#include "permsft/transfer.hpp"

using namespace permsft;

namespace {

GroupRingElement indicator(std::initializer_list<std::int64_t> xs) {
  std::vector<std::pair<LatticePoint, double>> t;
  for (auto x : xs) t.emplace_back(LatticePoint{x}, 1.0);
  return GroupRingElement(1, t);
}

std::vector<TorusQuotient> tori1(std::int64_t lo, std::int64_t hi) {
  std::vector<TorusQuotient> out;
  for (auto n = lo; n <= hi; ++n) out.emplace_back(std::vector<std::int64_t>{n});
  return out;
}

const double kLogGolden = 0.48121182505960347;

}  // namespace

TEST(Schedule, Validation) {
  EXPECT_EQ(WindowSchedule::boxes(2, 2, 4).size(), 3u);
  EXPECT_THROW(WindowSchedule::boxes(1, 0, 3), InvalidArgument);
  EXPECT_THROW(WindowSchedule::boxes(1, 4, 3), InvalidArgument);
  EXPECT_THROW(WindowSchedule({}), InvalidArgument);
  EXPECT_THROW(WindowSchedule({Window::cube(1, 3), Window::cube(1, 3)}), InvalidArgument);
  EXPECT_EQ(window_label(Window::cube(2, 4)), "box 4x4");
  EXPECT_EQ(window_label(Window::from_points({LatticePoint{0}, LatticePoint{2}})), "points 2");
}

TEST(Bounds, Formulas) {
  EXPECT_NEAR(bound_lower_formula(GroupRingElement::constant(1, std::numbers::e)), 0.0, 1e-15);
  EXPECT_NEAR(bound_lower_formula(indicator({0, 1, 2})), std::log(3.0) - 1.0, 1e-15);
  EXPECT_NEAR(bound_lower_formula(indicator({0, 1, 2})), 0.0986122886681098, 1e-12);
  EXPECT_NEAR(bound_lower_formula(GroupRingElement(1, {{LatticePoint{0}, 0.25}, {LatticePoint{3}, 0.75}})), -1.0,
              1e-15);
  EXPECT_EQ(bound_upper_formula(1), 0.0);
  EXPECT_NEAR(bound_upper_formula(2), 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(bound_upper_formula(3), std::log(6.0) / 3.0, 1e-15);
  EXPECT_NEAR(bound_upper_weighted(indicator({0, 1, 2}).scaled(2.0)), std::log(2.0) + std::log(6.0) / 3.0, 1e-15);
  EXPECT_TRUE(zero_entropy_classifier(Window::from_points({LatticePoint{0}, LatticePoint{5}})));
  EXPECT_FALSE(zero_entropy_classifier(indicator({0, 1, 2}).support()));
}

TEST(UpperEstimates, DominateTransferValue) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    const auto f = oracle::random_element(rng, 1, 3, 2, 0.3, 2.0);
    const double p = transfer_pressure_Z(f);
    for (const auto& row : upper_estimates(f, f.support(), WindowSchedule::boxes(1, 1, 10))) {
      ASSERT_FALSE(row.capacity_exceeded);
      EXPECT_GE(row.normalized, p - 1e-9) << row.window << " " << row.quantity;
    }
  }
}

TEST(UpperEstimates, GoldenCounts) {
  PermanentOptions o;
  o.integer_mode = true;
  const auto rows = upper_estimates(indicator({0, 1, 2}), indicator({0, 1, 2}).support(),
                                    WindowSchedule::boxes(1, 12, 12), o);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].quantity, "per");
  EXPECT_EQ(rows[1].quantity, "iper");
  ASSERT_TRUE(rows[0].count && rows[1].count);
  EXPECT_LE(*rows[0].count, *rows[1].count);
  EXPECT_GT(rows[0].normalized, kLogGolden);
}

TEST(UpperEstimates, TranslationIsBitExact) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto f = oracle::random_element(rng, dim, 3, 2, 0.3, 2.0);
    std::vector<std::int64_t> shift(dim);
    for (auto& s : shift) s = trial - 4;
    const LatticePoint s(shift);
    const auto g = f.translate(s);
    const auto sched = WindowSchedule::boxes(dim, 1, dim == 1 ? 8 : 3);
    const auto a = upper_estimates(f, f.support(), sched);
    const auto b = upper_estimates(g, g.support(), sched);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].log_value, b[i].log_value);
    const auto wa = upper_estimates(f, f.support(), WindowSchedule({Window::cube(dim, 3).translated(s)}));
    const auto wb = upper_estimates(f, f.support(), WindowSchedule({Window::cube(dim, 3)}));
    EXPECT_EQ(wa[0].log_value, wb[0].log_value);
  }
}

TEST(UpperEstimates, Monotone) {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> shrink(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto g = oracle::random_element(rng, dim, 4, 2, 0.3, 2.0);
    std::vector<std::pair<LatticePoint, double>> terms;
    for (const auto& [s, c] : g.terms()) {
      if (terms.empty() || shrink(rng) > 0.3) terms.emplace_back(s, c * shrink(rng));
    }
    const GroupRingElement f(dim, terms);
    const Window A = g.support();
    const auto sched = WindowSchedule::boxes(dim, 1, dim == 1 ? 7 : 3);
    const auto a = upper_estimates(f, A, sched);
    const auto b = upper_estimates(g, A, sched);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(a[i].log_value, b[i].log_value);
  }
}

TEST(UpperEstimates, Scaling) {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto f = oracle::random_element(rng, dim, 3, 2, 0.3, 2.0);
    const double C = 0.5 + trial;
    const auto sched = WindowSchedule::boxes(dim, 1, dim == 1 ? 8 : 3);
    const auto a = upper_estimates(f, f.support(), sched);
    const auto b = upper_estimates(f.scaled(C), f.support(), sched);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(b[i].normalized, a[i].normalized + std::log(C), 1e-12 * std::max(1.0, std::fabs(b[i].normalized)));
    }
  }
}

TEST(UpperEstimates, CapacityRowsAreReported) {
  PermanentOptions o;
  o.backend = Backend::kBacktracking;
  o.budget = 50;
  const auto f = indicator({-1, 0, 1});
  const auto rows = upper_estimates(f, f.support(), WindowSchedule::boxes(1, 2, 10), o);
  bool any = false;
  for (const auto& r : rows) {
    if (r.capacity_exceeded) {
      any = true;
      EXPECT_TRUE(std::isnan(r.normalized));
    }
  }
  EXPECT_TRUE(any);
  EXPECT_FALSE(rows.front().capacity_exceeded);
}

TEST(TorusEstimates, ZeroEntropyFamily) {
  const auto rows = torus_estimates(indicator({0, 1}), tori1(4, 12));
  for (const auto& r : rows) {
    ASSERT_TRUE(r.count);
    EXPECT_EQ(*r.count, 2u);
    EXPECT_EQ(r.kind, EstimateKind::kTorus);
  }
}

TEST(TorusEstimates, GoldenApproach) {
  const auto rows = torus_estimates(indicator({0, 1, 2}), tori1(4, 14));
  EXPECT_EQ(*rows.back().count, 845u);
  EXPECT_EQ(rows.front().window, "torus 4");
  // Short tori overshoot: 9 fields on Z/4 give log(9)/4 = 0.549.
  EXPECT_NEAR(rows.front().normalized, std::log(9.0) / 4.0, 1e-15);
  double best = -1;
  for (std::size_t i = 2; i < rows.size(); ++i) best = std::max(best, rows[i].normalized);
  EXPECT_NEAR(best, kLogGolden, 0.05);
  EXPECT_GT(best, kLogGolden);
}

TEST(TorusEstimates, Translation) {
  const auto f = indicator({3, 4, 5});
  EXPECT_EQ(canonical_translate(f), indicator({0, 1, 2}));
  const auto a = torus_estimates(f, tori1(5, 9));
  const auto b = torus_estimates(indicator({0, 1, 2}), tori1(5, 9));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].log_value, b[i].log_value);
}

TEST(TorusEstimates, RejectsCollapsingTorus) {
  EXPECT_THROW(torus_estimates(indicator({0, 3}), tori1(3, 3)), InvalidArgument);
  EXPECT_THROW(check_torus_injective(indicator({0, 1, 2}), TorusQuotient({2})), InvalidArgument);
  EXPECT_NO_THROW(check_torus_injective(indicator({0, 1, 2}), TorusQuotient({3})));
}

TEST(TorusEstimates, ThreadCountInvariant) {
  const GroupRingElement f = GroupRingElement::indicator(
      Window::from_points({LatticePoint{-1, 0}, LatticePoint{1, 0}, LatticePoint{0, -1}, LatticePoint{0, 1}}));
  std::vector<TorusQuotient> tori{TorusQuotient({3, 3}), TorusQuotient({3, 4}), TorusQuotient({4, 4})};
  const unsigned saved = max_threads();
  set_max_threads(1);
  const auto a = torus_estimates(f, tori);
  set_max_threads(3);
  const auto b = torus_estimates(f, tori);
  set_max_threads(saved);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].log_value, b[i].log_value);
    EXPECT_EQ(a[i].count, b[i].count);
  }
  EXPECT_EQ(*a[0].count, 448u);
}

TEST(Report, OneDimensional) {
  const auto f = indicator({0, 1, 2});
  QuadratureConfig q;
  ReportOptions opts;
  opts.quadrature = &q;
  const auto r = estimate_report(f, f.support(), WindowSchedule::boxes(1, 4, 10), tori1(4, 12), opts);
  ASSERT_TRUE(r.transfer);
  EXPECT_NEAR(*r.transfer, kLogGolden, 1e-12);
  ASSERT_TRUE(r.certified_upper);
  EXPECT_NEAR(*r.certified_upper, kLogGolden, 1e-12);
  EXPECT_NEAR(r.certified_lower, kLogGolden, 1e-12);
  EXPECT_TRUE(r.torus_converging);
  ASSERT_TRUE(r.mahler);
  EXPECT_LE(*r.mahler, kLogGolden + 1e-6);
  EXPECT_EQ(r.capacity_errors, 0u);

  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "window,size,log_value,normalized,kind,quantity");
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["torus_lower_label"], "converging-lower");
  EXPECT_EQ(j["rows"].size(), r.rows.size());
}

TEST(Report, TwoDimensionalTorusNeverCertified) {
  const GroupRingElement f = GroupRingElement::indicator(
      Window::from_points({LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 1}}));
  std::vector<TorusQuotient> tori{TorusQuotient({3, 3}), TorusQuotient({4, 4})};
  const auto r = estimate_report(f, f.support(), WindowSchedule::boxes(2, 2, 3), tori);
  EXPECT_FALSE(r.torus_converging);
  EXPECT_FALSE(r.transfer.has_value());
  ASSERT_TRUE(r.certified_upper && r.torus_lower);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["torus_lower_label"], "heuristic-lower");
  EXPECT_LE(r.certified_lower, *r.certified_upper);
}

TEST(Report, CsvIsDeterministic) {
  const auto f = indicator({-1, 0, 1});
  const auto sched = WindowSchedule::boxes(1, 2, 8);
  const auto a = report_csv(estimate_report(f, f.support(), sched, tori1(4, 9)));
  const auto b = report_csv(estimate_report(f, f.support(), sched, tori1(4, 9)));
  EXPECT_EQ(a, b);
}

#include "permsft/mahler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "permsft/determinant.hpp"
#include "permsft/entropy.hpp"
#include "permsft/error.hpp"
#include "permsft/parallel.hpp"

namespace permsft {

void QuadratureConfig::validate() const {
  if (grid < 8) throw InvalidArgument("quadrature grid must be >= 8");
  if (levels < 3) throw InvalidArgument("quadrature needs at least 3 levels");
  if (!(eps > 0 && eps <= 1e-6)) throw InvalidArgument("quadrature eps must lie in (0, 1e-6]");
  for (double e : eps_sweep) {
    if (!(e > 0 && e <= 1e-6)) throw InvalidArgument("eps sweep values must lie in (0, 1e-6]");
  }
}

namespace {

/// Midpoint sums of log(max(|g|, floor)) for every floor in `floors`.
std::vector<double> midpoint_sums(std::size_t dim, std::size_t n, const std::function<double(std::span<const double>)>& g,
                                  const std::vector<double>& floors) {
  std::size_t inner = 1;
  for (std::size_t d = 1; d < dim; ++d) inner *= n;
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, [&](std::size_t i0) {
    std::vector<double> theta(dim);
    theta[0] = (static_cast<double>(i0) + 0.5) / static_cast<double>(n);
    std::vector<double> acc(floors.size(), 0.0);
    for (std::size_t rest = 0; rest < inner; ++rest) {
      std::size_t r = rest;
      for (std::size_t d = dim; d-- > 1;) {
        theta[d] = (static_cast<double>(r % n) + 0.5) / static_cast<double>(n);
        r /= n;
      }
      const double v = std::fabs(g(theta));
      for (std::size_t k = 0; k < floors.size(); ++k) acc[k] += std::log(std::max(v, floors[k]));
    }
    rows[i0] = std::move(acc);
  });
  std::vector<double> total = tree_reduce(rows, std::vector<double>(floors.size(), 0.0),
                                          [](std::vector<double> a, const std::vector<double>& b) {
                                            for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
                                            return a;
                                          });
  const double cells = std::pow(static_cast<double>(n), static_cast<double>(dim));
  for (double& t : total) t /= cells;
  return total;
}

}  // namespace

QuadratureResult integrate_log_abs(std::size_t dim, const std::function<double(std::span<const double>)>& g,
                                   const QuadratureConfig& cfg, double scale) {
  cfg.validate();
  if (dim == 0) throw InvalidArgument("quadrature dimension must be >= 1");
  std::vector<double> floors{cfg.eps};
  floors.insert(floors.end(), cfg.eps_sweep.begin(), cfg.eps_sweep.end());

  QuadratureResult out;
  std::vector<double> finest;
  std::size_t n = cfg.grid;
  for (std::size_t level = 0; level < cfg.levels; ++level, n *= 2) {
    std::vector<double> sums = midpoint_sums(dim, n, g, floors);
    out.levels.push_back(scale * sums[0]);
    finest = std::move(sums);
  }
  double lo = finest[0], hi = finest[0];
  for (double v : finest) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.eps_spread = std::fabs(scale) * (hi - lo);

  const std::size_t L = out.levels.size();
  const double q0 = out.levels[L - 3], q1 = out.levels[L - 2], q2 = out.levels[L - 1];
  const double d1 = q1 - q0, d2 = q2 - q1;
  const double noise = 1e-12 * std::max(1.0, std::fabs(q2));
  if (std::fabs(d2) <= noise) {
    out.value = q2;
    out.order = std::numeric_limits<double>::infinity();
    out.error_estimate = std::fabs(d2) + out.eps_spread;
    out.converged = true;
    return out;
  }
  double p = std::fabs(d1) > 0 ? std::log2(std::fabs(d1) / std::fabs(d2)) : 1.0;
  if (!std::isfinite(p)) p = 1.0;
  p = std::clamp(p, 1.0, 8.0);
  const double factor = std::exp2(p) - 1.0;
  out.order = p;
  out.value = q2 + d2 / factor;
  out.error_estimate = std::fabs(d2) / factor + out.eps_spread;
  out.converged = std::fabs(d2) < std::fabs(d1);
  return out;
}

QuadratureResult mahler_measure(const GroupRingElement& f, const QuadratureConfig& cfg) {
  if (f.is_zero()) throw InvalidArgument("Mahler measure of the zero element");
  const std::size_t dim = f.dim();
  struct Term {
    std::vector<std::int64_t> exp;
    double coef;
  };
  std::vector<Term> terms;
  for (const auto& [s, c] : f.terms()) terms.push_back({{s.coords().begin(), s.coords().end()}, c});
  if (terms.size() == 1) {
    QuadratureResult out;
    out.value = std::log(std::fabs(terms[0].coef));
    out.converged = true;
    out.order = std::numeric_limits<double>::infinity();
    out.levels.assign(cfg.levels, out.value);
    return out;
  }
  auto g = [&](std::span<const double> theta) {
    std::complex<double> sum = 0;
    for (const auto& t : terms) {
      double phase = 0;
      for (std::size_t d = 0; d < dim; ++d) phase += static_cast<double>(t.exp[d]) * theta[d];
      // Reduce the phase first so large exponents keep full precision.
      phase -= std::floor(phase);
      const double ang = 2.0 * std::numbers::pi * phase;
      sum += t.coef * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return std::abs(sum);
  };
  return integrate_log_abs(dim, g, cfg);
}

double mahler_measure_jensen(const GroupRingElement& f) {
  if (f.is_zero()) throw InvalidArgument("Mahler measure of the zero element");
  if (f.dim() != 1) throw InvalidArgument("root-based Mahler measure needs one variable");
  const std::int64_t lo = f.terms().begin()->first[0];
  const std::int64_t hi = f.terms().rbegin()->first[0];
  const auto degree = static_cast<Eigen::Index>(hi - lo);
  const double lead = f.terms().rbegin()->second;
  double value = std::log(std::fabs(lead));
  if (degree == 0) return value;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index k = 0; k < degree; ++k) {
    companion(k, degree - 1) = -f.coef(LatticePoint{lo + k}) / lead;
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (const auto& r : solver.eigenvalues()) value += std::log(std::max(1.0, std::abs(r)));
  return value;
}

std::vector<double> fk_finite_sections(const GroupRingElement& f, const WindowSchedule& schedule) {
  std::vector<double> out;
  for (const Window& F : schedule.windows()) {
    out.push_back(finite_logdet_ffstar(f, F) / (2.0 * static_cast<double>(F.size())));
  }
  return out;
}

QuadratureResult dimer_integral(double a, double b, const QuadratureConfig& cfg, DimerForm form) {
  if (!(a > 0 && b > 0)) throw InvalidArgument("dimer parameters must be positive");
  const double a2 = a * a, b2 = b * b;
  const double two_pi = 2.0 * std::numbers::pi;
  std::function<double(std::span<const double>)> g;
  if (form == DimerForm::kCos2Pi) {
    g = [=](std::span<const double> t) {
      return 2 * a2 + 2 * b2 - 2 * a2 * std::cos(two_pi * t[0]) - 2 * b2 * std::cos(two_pi * t[1]);
    };
  } else {
    g = [=](std::span<const double> t) {
      return 2 * a2 + 2 * b2 - 2 * a2 * std::cos(2 * two_pi * t[0]) + 2 * b2 * std::cos(2 * two_pi * t[1]);
    };
  }
  return integrate_log_abs(2, g, cfg, 0.5);
}

}  // namespace permsft

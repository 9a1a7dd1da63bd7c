#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "permsft/group_ring.hpp"

namespace permsft {

class WindowSchedule;

struct QuadratureConfig {
  /// Midpoints per dimension on the coarsest level.
  std::size_t grid = 64;
  /// Number of grids; each doubles the previous one. At least 3.
  std::size_t levels = 3;
  /// Floor applied to |f| before taking the logarithm.
  double eps = 1e-10;
  /// Floors tried to measure sensitivity to zeros of f on the torus.
  std::vector<double> eps_sweep{1e-8, 1e-10, 1e-12};

  /// Throws InvalidArgument unless grid >= 8, levels >= 3, eps in (0, 1e-6].
  void validate() const;
};

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  /// False when successive refinements do not shrink.
  bool converged = false;
  /// Estimated algebraic order used for the extrapolation.
  double order = 0;
  /// Raw midpoint sums per level.
  std::vector<double> levels;
  /// Spread of the finest-level value across the eps sweep.
  double eps_spread = 0;
};

/// Integral over [0,1)^dim of scale * log(max(|g(theta)|, eps)), with
/// g supplied as a function of the grid coordinates.
QuadratureResult integrate_log_abs(std::size_t dim, const std::function<double(std::span<const double>)>& g,
                                   const QuadratureConfig& cfg, double scale = 1.0);

/// Logarithmic Mahler measure of a nonzero Laurent polynomial in d variables.
QuadratureResult mahler_measure(const GroupRingElement& f, const QuadratureConfig& cfg = {});

/// Exact Mahler measure in one variable via companion-matrix roots:
/// log|leading| + sum log max(1, |root|).
double mahler_measure_jensen(const GroupRingElement& f);

/// (1 / (2|F|)) log det of the (f f^*) section on each window.
std::vector<double> fk_finite_sections(const GroupRingElement& f, const WindowSchedule& schedule);

enum class DimerForm {
  /// 1/2 int int log(2a^2 + 2b^2 - 2a^2 cos(2 pi x) - 2b^2 cos(2 pi y)).
  kCos2Pi,
  /// 1/2 int int log(2a^2 + 2b^2 - 2a^2 cos(4 pi x) + 2b^2 cos(4 pi y)).
  kCos4Pi,
};

QuadratureResult dimer_integral(double a, double b, const QuadratureConfig& cfg = {},
                                DimerForm form = DimerForm::kCos2Pi);

}  // namespace permsft

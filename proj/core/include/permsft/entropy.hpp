#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permsft/group_ring.hpp"
#include "permsft/lattice.hpp"
#include "permsft/permanent.hpp"

namespace permsft {

/// Windows of strictly increasing cardinality along which normalized
/// permanents are evaluated.
class WindowSchedule {
 public:
  explicit WindowSchedule(std::vector<Window> windows);
  /// Cubes [0, n)^d for n = n_min .. n_max.
  static WindowSchedule boxes(std::size_t dim, std::int64_t n_min, std::int64_t n_max);

  const std::vector<Window>& windows() const noexcept { return windows_; }
  std::size_t size() const noexcept { return windows_.size(); }

 private:
  std::vector<Window> windows_;
};

enum class EstimateKind { kUpper, kTorus, kTransfer, kBound };
std::string_view kind_name(EstimateKind k);

/// One line of an estimate table.
struct EstimateRow {
  std::string window;  ///< e.g. "box 4x4", "torus 5x5", "transfer", "lower-formula"
  std::size_t size = 0;
  double log_value = 0;
  double normalized = 0;
  EstimateKind kind = EstimateKind::kUpper;
  /// Which quantity: "per", "iper", "trace", "perron", formula names.
  std::string quantity;
  /// Set when the exact kernel refused the window; values are then NaN.
  bool capacity_exceeded = false;
  std::optional<std::uint64_t> count;
};

std::string window_label(const Window& w);

/// (1/|F|) log per_{A,F}(f) and (1/|F|) log iper_{A,F}(f) per window. Each is
/// an upper bound for per(f). Windows the kernels refuse are reported with
/// capacity_exceeded set.
std::vector<EstimateRow> upper_estimates(const GroupRingElement& f, const Window& A, const WindowSchedule& schedule,
                                         const PermanentOptions& opts = {}, bool include_iper = true);

/// Throws InvalidArgument naming a pair of distinct points of supp(f) that
/// coincide in the torus, if any.
void check_torus_injective(const GroupRingElement& f, const TorusQuotient& q);

/// Translates f so its lexicographically smallest support point is 0.
GroupRingElement canonical_translate(const GroupRingElement& f);

/// (1/|G|) log per(pi_G(f)) for each torus G.
std::vector<EstimateRow> torus_estimates(const GroupRingElement& f, const std::vector<TorusQuotient>& tori,
                                         const PermanentOptions& opts = {});

/// log(||f||_1 / e).
double bound_lower_formula(const GroupRingElement& f);
/// (1/|A|) log(|A|!).
double bound_upper_formula(std::size_t support_size);
/// log ||f||_inf + bound_upper_formula(|supp f|), valid for weighted f since
/// f <= ||f||_inf 1_{supp f}.
double bound_upper_weighted(const GroupRingElement& f);
/// Entropy of X_A vanishes exactly when |A| <= 2.
bool zero_entropy_classifier(const Window& A);

struct QuadratureConfig;

/// Aggregated bracket for per(f).
struct EstimateReport {
  std::vector<EstimateRow> rows;
  /// Minimum over certified upper values: window estimates, the upper
  /// formula, and for d = 1 the transfer value.
  std::optional<double> certified_upper;
  /// Maximum over certified lower values: the lower formula, the Mahler
  /// measure less its error estimate, and for d = 1 the transfer value.
  double certified_lower = 0;
  /// Largest torus estimate. It converges to per(f) for d = 1 and is only a
  /// heuristic lower value for d >= 2.
  std::optional<double> torus_lower;
  bool torus_converging = false;
  std::optional<double> transfer;
  std::optional<double> mahler;
  double bound_lower = 0;
  double bound_upper = 0;
  std::size_t capacity_errors = 0;
};

struct ReportOptions {
  PermanentOptions permanent;
  bool include_iper = true;
  bool include_transfer = true;
  /// Adds the Mahler measure of f, a lower bound for per(f), when set.
  const QuadratureConfig* quadrature = nullptr;
};

EstimateReport estimate_report(const GroupRingElement& f, const Window& A, const WindowSchedule& schedule,
                               const std::vector<TorusQuotient>& tori, const ReportOptions& opts = {});

/// CSV with columns window,size,log_value,normalized,kind,quantity.
std::string report_csv(const EstimateReport& report);
std::string report_json(const EstimateReport& report);

}  // namespace permsft

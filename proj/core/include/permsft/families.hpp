#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permsft/entropy.hpp"
#include "permsft/group_ring.hpp"
#include "permsft/lattice.hpp"
#include "permsft/mahler.hpp"

namespace permsft {

// ---------------------------------------------------------------- per vs det

struct PerVsDetRow {
  std::string window;
  std::size_t size = 0;
  /// (1/|F|) log iper_{A,F}(|f|); NaN if the kernel refused the window.
  double iper_normalized = 0;
  /// (1/(2|F|)) log det of the (f f^*) section.
  double det_normalized = 0;
  /// det <= iper^2 on this window (within 1e-9 relative).
  bool inequality_holds = true;
  bool capacity_exceeded = false;
};

std::vector<PerVsDetRow> per_vs_det_report(const GroupRingElement& f, const WindowSchedule& schedule,
                                           const PermanentOptions& opts = {});

// ---------------------------------------------------------------- sign probe

enum class SignStatus { kConstant, kMixed, kVacuous };
std::string_view sign_status_name(SignStatus s);

struct SignProbe {
  SignStatus status = SignStatus::kVacuous;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

/// Signs of sgn(psi o phi_x) prod_t f_{x_t} over all fields with image `image`.
SignProbe constant_sign_probe(const GroupRingElement& f, const Window& F, const Window& image);

// ---------------------------------------------------------------- example families

/// One monomial of a family: exponent = base + K * k_multiple, coefficient =
/// params[param] times, per representative, the sign in `signs`
/// (signs[0] is the all-positive permanent side).
struct FamilyTerm {
  std::vector<int> base;
  std::vector<int> k_multiple;
  std::size_t param = 0;
  std::vector<int> signs;
};

enum class DetCombine { kEqual, kMax };

struct FamilySpec {
  std::string name;
  std::size_t dim = 1;
  std::vector<std::string> param_names;
  /// Smallest admissible K; 0 when the family has no K.
  int min_k = 0;
  DetCombine combine = DetCombine::kEqual;
  std::vector<FamilyTerm> terms;

  std::size_t representatives() const { return terms.empty() ? 0 : terms.front().signs.size() - 1; }
};

const std::vector<FamilySpec>& family_table();
const FamilySpec& find_family(std::string_view name);

struct FamilyParams {
  std::vector<double> values;
  int k = 0;
};

/// Nonnegative permanent-side element h.
GroupRingElement family_element(const FamilySpec& spec, const FamilyParams& params);
/// Signed determinant-side representative r (0-based).
GroupRingElement family_representative(const FamilySpec& spec, const FamilyParams& params, std::size_t r);
std::string format_params(const FamilySpec& spec, const FamilyParams& params);

struct FamilyEvalOptions {
  QuadratureConfig quadrature;
  /// d = 2 only: windows for upper estimates and tori for heuristic lower estimates.
  std::vector<std::int64_t> window_sizes{6};
  std::vector<std::int64_t> torus_sizes{3, 4, 5, 6};
  PermanentOptions permanent;
};

struct FamilyResult {
  std::string family;
  std::string params;
  double per_low = 0;
  double per_high = 0;
  /// True when [per_low, per_high] is certified (d = 1 transfer value).
  bool per_certified = false;
  std::vector<QuadratureResult> det_sides;
  double det_value = 0;
  double det_error = 0;
  /// Dimer family only: the explicit double integral.
  std::optional<QuadratureResult> explicit_integral;
  std::size_t capacity_errors = 0;
};

FamilyResult example_family_eval(const FamilySpec& spec, const FamilyParams& params,
                                 const FamilyEvalOptions& opts = {});

/// Header family,params,per_estimate_low,per_estimate_high,det_value,det_error_estimate.
std::string compare_csv_header();
std::string compare_csv_row(const FamilyResult& r);

}  // namespace permsft

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "permsft/lattice.hpp"

namespace permsft {

/// A finitely supported real function on Z^d, read as an element of the
/// group ring: f = sum_s f_s s. Zero coefficients are never stored.
class GroupRingElement {
 public:
  using Terms = std::map<LatticePoint, double>;

  explicit GroupRingElement(std::size_t dim = 1) : dim_(dim) {}
  GroupRingElement(std::size_t dim, std::vector<std::pair<LatticePoint, double>> terms);

  /// c * delta_s.
  static GroupRingElement monomial(const LatticePoint& s, double c = 1.0);
  /// c * delta_0.
  static GroupRingElement constant(std::size_t dim, double c);
  /// Indicator function of a window.
  static GroupRingElement indicator(const Window& A);

  std::size_t dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  double coef(const LatticePoint& s) const;

  /// Points with nonzero coefficient. Throws on the zero element.
  Window support() const;

  GroupRingElement adjoint() const;
  GroupRingElement translate(const LatticePoint& s) const;
  GroupRingElement abs() const;
  GroupRingElement scaled(double c) const;

  double l1_norm() const noexcept;
  double linf_norm() const noexcept;
  /// Smallest positive coefficient; 0 if none.
  double min_positive() const noexcept;
  bool is_nonnegative() const noexcept;
  /// All coefficients equal to 1.
  bool is_indicator() const noexcept;

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  void insert(const LatticePoint& s, double c);
  std::size_t dim_;
  Terms terms_;
};

GroupRingElement operator+(const GroupRingElement& f, const GroupRingElement& g);
GroupRingElement operator-(const GroupRingElement& f, const GroupRingElement& g);

/// Group-ring product (fg)_u = sum_{s+t=u} f_s g_t.
GroupRingElement convolve(const GroupRingElement& f, const GroupRingElement& g);

/// Coefficientwise product (f.g)_s = f_s g_s.
GroupRingElement pointwise(const GroupRingElement& f, const GroupRingElement& g);

/// Finite quotient Z^d / (n_1 Z x ... x n_d Z).
class TorusQuotient {
 public:
  explicit TorusQuotient(std::vector<std::int64_t> moduli);

  std::size_t dim() const noexcept { return moduli_.size(); }
  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }
  std::size_t order() const noexcept { return order_; }

  /// Row-major index (last coordinate fastest) of the class of p.
  std::size_t index_of(const LatticePoint& p) const;
  /// Canonical representative in [0, n_1) x ... x [0, n_d) of index i.
  LatticePoint element(std::size_t i) const;
  /// True when p lies in the subgroup.
  bool is_trivial(const LatticePoint& p) const;

 private:
  std::vector<std::int64_t> moduli_;
  std::size_t order_;
};

/// Sum of coefficients over each fiber of the quotient map, as a dense
/// array indexed by TorusQuotient::index_of.
std::vector<double> project(const GroupRingElement& f, const TorusQuotient& q);

}  // namespace permsft

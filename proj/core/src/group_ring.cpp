#include "permsft/group_ring.hpp"

#include <cmath>

#include "permsft/error.hpp"

namespace permsft {

GroupRingElement::GroupRingElement(std::size_t dim, std::vector<std::pair<LatticePoint, double>> terms) : dim_(dim) {
  if (dim == 0) throw InvalidArgument("group ring dimension must be >= 1");
  for (const auto& [s, c] : terms) insert(s, c);
}

void GroupRingElement::insert(const LatticePoint& s, double c) {
  if (s.dim() != dim_) throw InvalidArgument("term exponent has dimension " + std::to_string(s.dim()) +
                                             ", expected " + std::to_string(dim_));
  if (!std::isfinite(c)) throw InvalidArgument("coefficient at " + s.to_string() + " is not finite");
  auto [it, fresh] = terms_.try_emplace(s, c);
  if (!fresh) it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

GroupRingElement GroupRingElement::monomial(const LatticePoint& s, double c) {
  return GroupRingElement(s.dim(), {{s, c}});
}

GroupRingElement GroupRingElement::constant(std::size_t dim, double c) {
  return monomial(LatticePoint::zero(dim), c);
}

GroupRingElement GroupRingElement::indicator(const Window& A) {
  if (A.empty()) throw InvalidArgument("indicator of an empty window");
  std::vector<std::pair<LatticePoint, double>> terms;
  for (const auto& a : A) terms.emplace_back(a, 1.0);
  return GroupRingElement(A.dim(), std::move(terms));
}

double GroupRingElement::coef(const LatticePoint& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? 0.0 : it->second;
}

Window GroupRingElement::support() const {
  if (terms_.empty()) throw InvalidArgument("support of the zero element is empty");
  std::vector<LatticePoint> pts;
  pts.reserve(terms_.size());
  for (const auto& [s, c] : terms_) pts.push_back(s);
  return Window::from_points(std::move(pts));
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement out(dim_);
  for (const auto& [s, c] : terms_) out.terms_.emplace(-s, c);
  return out;
}

GroupRingElement GroupRingElement::translate(const LatticePoint& s) const {
  GroupRingElement out(dim_);
  for (const auto& [t, c] : terms_) out.terms_.emplace(t + s, c);
  return out;
}

GroupRingElement GroupRingElement::abs() const {
  GroupRingElement out(dim_);
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::fabs(c));
  return out;
}

GroupRingElement GroupRingElement::scaled(double c) const {
  GroupRingElement out(dim_);
  for (const auto& [s, v] : terms_) out.insert(s, v * c);
  return out;
}

double GroupRingElement::l1_norm() const noexcept {
  double sum = 0.0;
  for (const auto& [s, c] : terms_) sum += std::fabs(c);
  return sum;
}

double GroupRingElement::linf_norm() const noexcept {
  double m = 0.0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::fabs(c));
  return m;
}

double GroupRingElement::min_positive() const noexcept {
  double m = 0.0;
  for (const auto& [s, c] : terms_) {
    if (c > 0 && (m == 0.0 || c < m)) m = c;
  }
  return m;
}

bool GroupRingElement::is_nonnegative() const noexcept {
  for (const auto& [s, c] : terms_) {
    if (c < 0) return false;
  }
  return true;
}

bool GroupRingElement::is_indicator() const noexcept {
  for (const auto& [s, c] : terms_) {
    if (c != 1.0) return false;
  }
  return true;
}

GroupRingElement operator+(const GroupRingElement& f, const GroupRingElement& g) {
  if (f.dim() != g.dim()) throw InvalidArgument("group ring dimension mismatch");
  std::vector<std::pair<LatticePoint, double>> terms(f.terms().begin(), f.terms().end());
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return GroupRingElement(f.dim(), std::move(terms));
}

GroupRingElement operator-(const GroupRingElement& f, const GroupRingElement& g) { return f + g.scaled(-1.0); }

GroupRingElement convolve(const GroupRingElement& f, const GroupRingElement& g) {
  if (f.dim() != g.dim()) throw InvalidArgument("group ring dimension mismatch");
  std::map<LatticePoint, double> acc;
  for (const auto& [s, a] : f.terms()) {
    for (const auto& [t, b] : g.terms()) acc[s + t] += a * b;
  }
  std::vector<std::pair<LatticePoint, double>> terms(acc.begin(), acc.end());
  return GroupRingElement(f.dim(), std::move(terms));
}

GroupRingElement pointwise(const GroupRingElement& f, const GroupRingElement& g) {
  if (f.dim() != g.dim()) throw InvalidArgument("group ring dimension mismatch");
  std::vector<std::pair<LatticePoint, double>> terms;
  for (const auto& [s, a] : f.terms()) {
    const double b = g.coef(s);
    if (b != 0.0) terms.emplace_back(s, a * b);
  }
  return GroupRingElement(f.dim(), std::move(terms));
}

TorusQuotient::TorusQuotient(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)), order_(1) {
  if (moduli_.empty()) throw InvalidArgument("torus needs at least one modulus");
  for (auto n : moduli_) {
    if (n < 1) throw InvalidArgument("torus moduli must be >= 1");
    order_ *= static_cast<std::size_t>(n);
  }
}

std::size_t TorusQuotient::index_of(const LatticePoint& p) const {
  if (p.dim() != dim()) throw InvalidArgument("point dimension does not match torus");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::int64_t r = p[i] % moduli_[i];
    if (r < 0) r += moduli_[i];
    idx = idx * static_cast<std::size_t>(moduli_[i]) + static_cast<std::size_t>(r);
  }
  return idx;
}

LatticePoint TorusQuotient::element(std::size_t i) const {
  std::vector<std::int64_t> c(moduli_.size());
  for (std::size_t k = moduli_.size(); k-- > 0;) {
    c[k] = static_cast<std::int64_t>(i % static_cast<std::size_t>(moduli_[k]));
    i /= static_cast<std::size_t>(moduli_[k]);
  }
  return LatticePoint(std::move(c));
}

bool TorusQuotient::is_trivial(const LatticePoint& p) const { return index_of(p) == 0; }

std::vector<double> project(const GroupRingElement& f, const TorusQuotient& q) {
  if (f.dim() != q.dim()) throw InvalidArgument("element dimension does not match torus");
  std::vector<double> out(q.order(), 0.0);
  for (const auto& [s, c] : f.terms()) out[q.index_of(s)] += c;
  return out;
}

}  // namespace permsft

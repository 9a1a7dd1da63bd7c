#include "permsft/lattice.hpp"

#include <algorithm>
#include <iterator>

#include "permsft/error.hpp"

namespace permsft {

LatticePoint LatticePoint::unit(std::size_t dim, std::size_t axis, std::int64_t step) {
  if (axis >= dim) throw InvalidArgument("unit vector axis out of range");
  std::vector<std::int64_t> c(dim, 0);
  c[axis] = step;
  return LatticePoint(std::move(c));
}

bool LatticePoint::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
}

LatticePoint LatticePoint::operator+(const LatticePoint& other) const {
  if (other.dim() != dim()) throw InvalidArgument("lattice point dimension mismatch");
  std::vector<std::int64_t> c(c_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.c_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::operator-(const LatticePoint& other) const {
  if (other.dim() != dim()) throw InvalidArgument("lattice point dimension mismatch");
  std::vector<std::int64_t> c(c_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= other.c_[i];
  return LatticePoint(std::move(c));
}

LatticePoint LatticePoint::operator-() const {
  std::vector<std::int64_t> c(c_);
  for (auto& v : c) v = -v;
  return LatticePoint(std::move(c));
}

std::string LatticePoint::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : p.coords()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

void check_dims(const std::vector<LatticePoint>& pts) {
  for (const auto& p : pts) {
    if (p.dim() == 0) throw InvalidArgument("lattice points must have dimension >= 1");
    if (p.dim() != pts.front().dim()) throw InvalidArgument("window points have mixed dimensions");
  }
}

void check_same_dim(const Window& a, const Window& b) {
  if (!a.empty() && !b.empty() && a.dim() != b.dim()) throw InvalidArgument("window dimension mismatch");
}

}  // namespace

Window Window::box(const LatticePoint& origin, std::span<const std::int64_t> lengths) {
  if (origin.dim() == 0 || lengths.size() != origin.dim()) {
    throw InvalidArgument("box origin and lengths must have the same dimension >= 1");
  }
  std::size_t total = 1;
  for (auto l : lengths) {
    if (l < 1) throw InvalidArgument("box lengths must be >= 1");
    total *= static_cast<std::size_t>(l);
  }
  std::vector<LatticePoint> pts;
  pts.reserve(total);
  std::vector<std::int64_t> idx(lengths.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<std::int64_t> c(origin.coords().begin(), origin.coords().end());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += idx[i];
    pts.emplace_back(std::move(c));
    for (std::size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < lengths[i]) break;
      idx[i] = 0;
    }
  }
  return Window(std::move(pts));
}

Window Window::cube(std::size_t dim, std::int64_t n) {
  std::vector<std::int64_t> lengths(dim, n);
  return box(LatticePoint::zero(dim), lengths);
}

Window Window::from_points(std::vector<LatticePoint> points) {
  if (points.empty()) throw InvalidArgument("window must be nonempty");
  check_dims(points);
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end()) {
    throw InvalidArgument("window contains duplicate points");
  }
  return Window(std::move(points));
}

Window Window::collect(std::vector<LatticePoint> points) {
  check_dims(points);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return Window(std::move(points));
}

bool Window::contains(const LatticePoint& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

std::optional<std::size_t> Window::index_of(const LatticePoint& p) const {
  auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
  if (it == pts_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - pts_.begin());
}

Window Window::translated(const LatticePoint& s) const {
  std::vector<LatticePoint> pts;
  pts.reserve(pts_.size());
  for (const auto& p : pts_) pts.push_back(p + s);
  return Window(std::move(pts));
}

Window Window::negated() const {
  std::vector<LatticePoint> pts;
  pts.reserve(pts_.size());
  for (auto it = pts_.rbegin(); it != pts_.rend(); ++it) pts.push_back(-*it);
  return Window(std::move(pts));
}

Window set_union(const Window& a, const Window& b) {
  check_same_dim(a, b);
  std::vector<LatticePoint> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Window::collect(std::move(out));
}

Window set_intersection(const Window& a, const Window& b) {
  check_same_dim(a, b);
  std::vector<LatticePoint> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Window::collect(std::move(out));
}

Window set_difference(const Window& a, const Window& b) {
  check_same_dim(a, b);
  std::vector<LatticePoint> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Window::collect(std::move(out));
}

bool is_subset(const Window& a, const Window& b) {
  check_same_dim(a, b);
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Window dilate(const Window& F, const Window& A) {
  check_same_dim(F, A);
  std::vector<LatticePoint> out;
  out.reserve(F.size() * A.size());
  for (const auto& t : F) {
    for (const auto& a : A) out.push_back(t + a);
  }
  return Window::collect(std::move(out));
}

Window interior(const Window& F, const Window& A) {
  check_same_dim(F, A);
  if (A.empty()) return F;
  // Every member t satisfies t - a in F for all a, so t lies in F + a for each a.
  std::vector<LatticePoint> out;
  for (const auto& p : F) {
    const LatticePoint t = p + A[0];
    bool ok = true;
    for (const auto& a : A) {
      if (!F.contains(t - a)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(t);
  }
  return Window::collect(std::move(out));
}

double folner_defect(const Window& F, const Window& K) {
  if (F.empty()) throw InvalidArgument("Folner defect of an empty window");
  const Window FK = dilate(F, K);
  return static_cast<double>(set_difference(FK, F).size()) / static_cast<double>(F.size());
}

}  // namespace permsft

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace permsft {

/// A point of the lattice Z^d. Points compare lexicographically, which is the
/// canonical total order used throughout (it is translation invariant).
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::int64_t> coords) : c_(std::move(coords)) {}
  LatticePoint(std::initializer_list<std::int64_t> coords) : c_(coords) {}

  static LatticePoint zero(std::size_t dim) { return LatticePoint(std::vector<std::int64_t>(dim, 0)); }
  static LatticePoint unit(std::size_t dim, std::size_t axis, std::int64_t step = 1);

  std::size_t dim() const noexcept { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::span<const std::int64_t> coords() const noexcept { return c_; }
  bool is_zero() const noexcept;

  LatticePoint operator+(const LatticePoint& other) const;
  LatticePoint operator-(const LatticePoint& other) const;
  LatticePoint operator-() const;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

  std::string to_string() const;

 private:
  std::vector<std::int64_t> c_;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

/// A finite set of lattice points, stored sorted and duplicate free. Set
/// operations are merge based.
///
/// User-facing constructors (`box`, `from_points`) reject empty input; the
/// results of set algebra (e.g. an interior) may be empty.
class Window {
 public:
  Window() = default;

  /// The box origin + [0, l_1) x ... x [0, l_d).
  static Window box(const LatticePoint& origin, std::span<const std::int64_t> lengths);
  /// The cube [0, n)^d.
  static Window cube(std::size_t dim, std::int64_t n);
  /// Explicit point list. Throws on empty input, duplicates, or mixed dimensions.
  static Window from_points(std::vector<LatticePoint> points);
  /// Sorts and deduplicates; accepts empty input.
  static Window collect(std::vector<LatticePoint> points);

  std::size_t size() const noexcept { return pts_.size(); }
  bool empty() const noexcept { return pts_.empty(); }
  std::size_t dim() const noexcept { return pts_.empty() ? 0 : pts_.front().dim(); }
  const std::vector<LatticePoint>& points() const noexcept { return pts_; }
  const LatticePoint& operator[](std::size_t i) const { return pts_[i]; }
  auto begin() const noexcept { return pts_.begin(); }
  auto end() const noexcept { return pts_.end(); }

  bool contains(const LatticePoint& p) const;
  std::optional<std::size_t> index_of(const LatticePoint& p) const;

  Window translated(const LatticePoint& s) const;
  Window negated() const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  explicit Window(std::vector<LatticePoint> sorted_unique) : pts_(std::move(sorted_unique)) {}
  std::vector<LatticePoint> pts_;
};

Window set_union(const Window& a, const Window& b);
Window set_intersection(const Window& a, const Window& b);
Window set_difference(const Window& a, const Window& b);
bool is_subset(const Window& a, const Window& b);

/// Minkowski sum FA = {t + a : t in F, a in A}.
Window dilate(const Window& F, const Window& A);

/// {t : t - a in F for every a in A}. This is the set of sites that every
/// locally admissible pattern on F must cover.
Window interior(const Window& F, const Window& A);

/// |FK \ F| / |F|.
double folner_defect(const Window& F, const Window& K);

}  // namespace permsft

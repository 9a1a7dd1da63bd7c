#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "permsft/group_ring.hpp"
#include "permsft/lattice.hpp"
#include "permsft/log_value.hpp"

namespace permsft {

/// Dense row-major real matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Sparse nonnegative rows x cols matrix with a set of columns that every
/// counted matching must use. With no required columns the permanent is the
/// usual rectangular one: the sum over injective row-to-column maps.
struct WeightedBipartite {
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// Per row, (column, weight) pairs sorted by column with weight > 0.
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
  std::vector<bool> required;

  WeightedBipartite() = default;
  WeightedBipartite(std::size_t r, std::size_t c) : rows(r), cols(c), adjacency(r), required(c, false) {}

  static WeightedBipartite from_dense(const DenseMatrix& m);
  DenseMatrix to_dense() const;
  /// Adds weight to entry (row, col); entries must be added at most once.
  void add(std::size_t row, std::size_t col, double weight);
  std::size_t nonzeros() const;
  bool is_zero_one() const;
};

enum class Backend { kAuto, kRyser, kBacktracking, kFrontier, kInclusionExclusion };

std::string_view backend_name(Backend b);
std::optional<Backend> parse_backend(std::string_view name);

struct PermanentOptions {
  Backend backend = Backend::kAuto;
  /// Abort with CapacityError once a kernel's work estimate exceeds this.
  double budget = 1e8;
  /// Exact counting; requires every weight to equal 1.
  bool integer_mode = false;
};

struct PermanentValue {
  LogValue value;
  /// Exact count in integer mode.
  std::optional<std::uint64_t> count;
  Backend backend = Backend::kAuto;
  double work = 0;

  double log() const noexcept { return value.log(); }
  double linear() const noexcept { return value.linear(); }
};

/// Permanent of B with its required-column constraint.
/// Throws InvalidArgument if rows > cols, CapacityError if the budget is exceeded.
PermanentValue matrix_permanent(const WeightedBipartite& B, const PermanentOptions& opts = {});

/// The matrix B_{F,FA,f}: rows F, columns FA, entry (t, t + a) = f_a.
/// With require_interior the interior columns of F are marked required.
WeightedBipartite pattern_matrix(const GroupRingElement& f, const Window& A, const Window& F, bool require_interior);

/// Weighted sum over injective displacement fields on F.
PermanentValue iper_AF(const GroupRingElement& f, const Window& A, const Window& F, const PermanentOptions& opts = {});
/// Weighted sum over locally admissible displacement fields on F.
PermanentValue per_AF(const GroupRingElement& f, const Window& A, const Window& F, const PermanentOptions& opts = {});

/// Circulant matrix of f projected to the torus: entry (t, t + s) = f_s.
WeightedBipartite torus_matrix(const GroupRingElement& f, const TorusQuotient& q);

/// Doubly stochastic completion of B_{F,FA,f} for ||f||_1 = 1, indexed by
/// F(A u {0}) on both sides. Rows of F restricted to FA reproduce B_{F,FA,f}.
DenseMatrix doubly_stochastic_extension(const GroupRingElement& f, const Window& A, const Window& F);
/// Row/column labels of doubly_stochastic_extension.
Window extension_sites(const Window& A, const Window& F);

/// prod_i (r_i!)^{1/r_i} over row sums of a square 0-1 matrix.
double bregman_bound(const DenseMatrix& B);
double log_bregman_bound(const DenseMatrix& B);
/// n!/n^n.
double vdw_bound(std::size_t n);

/// Permanent of a dense nonnegative matrix (rows <= cols).
PermanentValue dense_permanent(const DenseMatrix& m, const PermanentOptions& opts = {});

}  // namespace permsft

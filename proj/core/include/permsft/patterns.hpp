#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "permsft/lattice.hpp"

namespace permsft {

/// Precomputed combinatorics of displacement fields x: F -> A on a window.
/// Row i is the site F[i]; column j is the site FA[j]. Displacement choice k
/// at row i sends F[i] to F[i] + A[k].
class PatternSpace {
 public:
  PatternSpace(Window A, Window F);

  const Window& displacements() const noexcept { return A_; }
  const Window& window() const noexcept { return F_; }
  const Window& dilated() const noexcept { return FA_; }
  /// Sites of FA that an admissible pattern must cover.
  const Window& required() const noexcept { return required_; }
  bool is_required(std::size_t col) const { return required_mask_[col]; }

  std::size_t rows() const noexcept { return F_.size(); }
  std::size_t cols() const noexcept { return FA_.size(); }
  std::size_t choices() const noexcept { return A_.size(); }
  /// Column index of F[row] + A[choice].
  std::size_t target(std::size_t row, std::size_t choice) const { return target_[row * A_.size() + choice]; }
  /// Largest row index that can reach the column.
  std::size_t last_source(std::size_t col) const { return last_source_[col]; }

 private:
  Window A_, F_, FA_, required_;
  std::vector<std::size_t> target_;
  std::vector<std::size_t> last_source_;
  std::vector<bool> required_mask_;
};

/// Displacement choices, one index into A per row of F.
using ChoiceVisitor = std::function<void(std::span<const std::size_t>)>;

/// Injective fields, depth first over F in lexicographic order.
void for_each_injective(const PatternSpace& space, const ChoiceVisitor& visit);
/// Injective fields whose image contains the required sites.
void for_each_admissible(const PatternSpace& space, const ChoiceVisitor& visit);
/// Injective fields with image exactly `image`. Throws unless
/// image is a subset of FA with |image| = |F|.
void for_each_with_image(const PatternSpace& space, const Window& image, const ChoiceVisitor& visit);

/// A displacement field on a window; displacement[i] belongs to window[i].
struct Pattern {
  std::vector<LatticePoint> displacement;

  /// The sites F[i] + displacement[i], in row order.
  std::vector<LatticePoint> targets(const Window& F) const;
  Window image(const Window& F) const;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

Pattern to_pattern(const PatternSpace& space, std::span<const std::size_t> choice);

std::vector<Pattern> enumerate_injective(const Window& A, const Window& F);
std::vector<Pattern> enumerate_admissible(const Window& A, const Window& F);
std::vector<Pattern> enumerate_with_image(const Window& A, const Window& F, const Window& image);

/// Candidate images: subsets of FA with |F| points, in lexicographic order of
/// their sorted point lists. With require_interior, only those containing
/// the required sites.
void for_each_target_set(const Window& A, const Window& F, bool require_interior,
                         const std::function<void(const Window&)>& visit);
std::vector<Window> theta(const Window& A, const Window& F, bool require_interior);

/// Sign of the permutation t -> psi(t + x_t) of F, where psi maps the k-th
/// point of `image` (lexicographic order) to F[relabel[k]]. The default
/// relabeling is the identity, i.e. psi is the order isomorphism.
/// Throws if the pattern's image is not `image`.
int pattern_sign(const Window& F, const Pattern& x, const Window& image,
                 std::optional<std::span<const std::size_t>> relabel = std::nullopt);

/// Parity of a permutation of {0..n-1} given as an image array.
int permutation_sign(std::span<const std::size_t> perm);

/// Sign of the field given by column indices `targets` (row i -> column
/// targets[i]), relative to the order isomorphism of its image onto the rows.
int choice_sign(std::span<const std::size_t> targets);

}  // namespace permsft

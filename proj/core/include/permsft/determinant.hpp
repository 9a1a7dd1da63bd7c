#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "permsft/group_ring.hpp"
#include "permsft/lattice.hpp"

namespace permsft {

/// sum over fields x on F with image `image` of sgn(psi o phi_x) prod_t f_{x_t},
/// where displacements range over supp(f) and psi is the order isomorphism
/// image -> F (optionally relabeled as in pattern_sign).
double signed_target_sum(const GroupRingElement& f, const Window& F, const Window& image,
                         std::optional<std::span<const std::size_t>> relabel = std::nullopt);

/// The Gram matrix M_{s,t} = (f f^*)_{s-t}, s, t in -F, in the lexicographic order of -F.
std::vector<double> ffstar_section(const GroupRingElement& f, const Window& F);
double finite_det_ffstar(const GroupRingElement& f, const Window& F);
/// log of finite_det_ffstar; -inf when the section is singular in floating point.
double finite_logdet_ffstar(const GroupRingElement& f, const Window& F);

struct DetIdentity {
  double lhs = 0;  ///< finite_det_ffstar(f, F)
  double rhs = 0;  ///< sum over candidate images of signed_target_sum squared
  std::size_t images = 0;  ///< images realized by at least one field
};

/// Both sides of the expansion of the finite section determinant into
/// squared signed pattern sums grouped by image.
DetIdentity det_in_IA_check(const GroupRingElement& f, const Window& F);

}  // namespace permsft

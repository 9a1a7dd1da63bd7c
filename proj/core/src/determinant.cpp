#include "permsft/determinant.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "permsft/error.hpp"
#include "permsft/patterns.hpp"

namespace permsft {

namespace {

Eigen::MatrixXd section_matrix(const GroupRingElement& f, const Window& F) {
  if (f.is_zero()) throw InvalidArgument("finite section of the zero element");
  if (F.empty() || F.dim() != f.dim()) throw InvalidArgument("window dimension does not match element");
  const GroupRingElement g = convolve(f, f.adjoint());
  const Window negF = F.negated();
  const std::size_t n = negF.size();
  Eigen::MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M(i, j) = g.coef(negF[i] - negF[j]);
  }
  return M;
}

}  // namespace

double signed_target_sum(const GroupRingElement& f, const Window& F, const Window& image,
                         std::optional<std::span<const std::size_t>> relabel) {
  const PatternSpace space(f.support(), F);
  if (relabel && relabel->size() != F.size()) throw InvalidArgument("relabeling must have one entry per site");
  std::vector<double> coef(space.choices());
  for (std::size_t k = 0; k < space.choices(); ++k) coef[k] = f.coef(space.displacements()[k]);
  std::vector<std::size_t> rank(space.cols(), 0);
  for (std::size_t r = 0; r < image.size(); ++r) {
    if (auto idx = space.dilated().index_of(image[r])) rank[*idx] = r;
  }
  double total = 0;
  std::vector<std::size_t> perm(F.size());
  for_each_with_image(space, image, [&](std::span<const std::size_t> choice) {
    double term = 1;
    for (std::size_t i = 0; i < choice.size(); ++i) {
      term *= coef[choice[i]];
      const std::size_t r = rank[space.target(i, choice[i])];
      perm[i] = relabel ? (*relabel)[r] : r;
    }
    total += permutation_sign(perm) * term;
  });
  return total;
}

std::vector<double> ffstar_section(const GroupRingElement& f, const Window& F) {
  const Eigen::MatrixXd M = section_matrix(f, F);
  std::vector<double> out(static_cast<std::size_t>(M.size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out[static_cast<std::size_t>(i * M.cols() + j)] = M(i, j);
  }
  return out;
}

double finite_det_ffstar(const GroupRingElement& f, const Window& F) {
  return section_matrix(f, F).partialPivLu().determinant();
}

double finite_logdet_ffstar(const GroupRingElement& f, const Window& F) {
  const Eigen::MatrixXd M = section_matrix(f, F);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const Eigen::MatrixXd& U = lu.matrixLU();
  double logdet = 0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double d = U(i, i);
    if (d == 0) return -std::numeric_limits<double>::infinity();
    if (d < 0) sign = -sign;
    logdet += std::log(std::fabs(d));
  }
  if (sign < 0) return -std::numeric_limits<double>::infinity();
  return logdet;
}

DetIdentity det_in_IA_check(const GroupRingElement& f, const Window& F) {
  DetIdentity out;
  out.lhs = finite_det_ffstar(f, F);
  const PatternSpace space(f.support(), F);
  std::vector<double> coef(space.choices());
  for (std::size_t k = 0; k < space.choices(); ++k) coef[k] = f.coef(space.displacements()[k]);
  std::map<std::vector<std::size_t>, double> by_image;
  std::vector<std::size_t> targets(F.size());
  for_each_injective(space, [&](std::span<const std::size_t> choice) {
    double term = 1;
    for (std::size_t i = 0; i < choice.size(); ++i) {
      term *= coef[choice[i]];
      targets[i] = space.target(i, choice[i]);
    }
    term *= choice_sign(targets);
    std::vector<std::size_t> key(targets);
    std::sort(key.begin(), key.end());
    by_image[std::move(key)] += term;
  });
  out.images = by_image.size();
  for (const auto& [key, v] : by_image) out.rhs += v * v;
  return out;
}

}  // namespace permsft

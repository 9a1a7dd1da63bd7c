#include "permsft/patterns.hpp"

#include <algorithm>
#include <numeric>

#include "permsft/error.hpp"

namespace permsft {

PatternSpace::PatternSpace(Window A, Window F) : A_(std::move(A)), F_(std::move(F)) {
  if (A_.empty() || F_.empty()) throw InvalidArgument("displacement set and window must be nonempty");
  if (A_.dim() != F_.dim()) throw InvalidArgument("displacement set and window differ in dimension");
  FA_ = dilate(F_, A_);
  required_ = interior(F_, A_);
  target_.resize(F_.size() * A_.size());
  last_source_.assign(FA_.size(), 0);
  required_mask_.assign(FA_.size(), false);
  for (std::size_t i = 0; i < F_.size(); ++i) {
    for (std::size_t k = 0; k < A_.size(); ++k) {
      const std::size_t col = *FA_.index_of(F_[i] + A_[k]);
      target_[i * A_.size() + k] = col;
      last_source_[col] = std::max(last_source_[col], i);
    }
  }
  for (const auto& t : required_) required_mask_[*FA_.index_of(t)] = true;
}

namespace {

class Enumerator {
 public:
  Enumerator(const PatternSpace& space, std::vector<bool> allowed, std::vector<bool> must_cover,
             const ChoiceVisitor& visit)
      : space_(space), allowed_(std::move(allowed)), used_(space.cols(), false), choice_(space.rows()),
        closing_(space.rows()), visit_(visit) {
    for (std::size_t c = 0; c < space.cols(); ++c) {
      if (must_cover[c]) closing_[space.last_source(c)].push_back(c);
    }
  }

  void run() { descend(0); }

 private:
  void descend(std::size_t row) {
    if (row == space_.rows()) {
      visit_(choice_);
      return;
    }
    for (std::size_t k = 0; k < space_.choices(); ++k) {
      const std::size_t col = space_.target(row, k);
      if (used_[col] || !allowed_[col]) continue;
      used_[col] = true;
      choice_[row] = k;
      bool feasible = true;
      for (std::size_t c : closing_[row]) {
        if (!used_[c]) {
          feasible = false;
          break;
        }
      }
      if (feasible) descend(row + 1);
      used_[col] = false;
    }
  }

  const PatternSpace& space_;
  std::vector<bool> allowed_;
  std::vector<bool> used_;
  std::vector<std::size_t> choice_;
  std::vector<std::vector<std::size_t>> closing_;
  const ChoiceVisitor& visit_;
};

std::vector<bool> image_mask(const PatternSpace& space, const Window& image) {
  if (image.size() != space.rows()) throw InvalidArgument("target set must have the same size as the window");
  std::vector<bool> mask(space.cols(), false);
  for (const auto& p : image) {
    auto idx = space.dilated().index_of(p);
    if (!idx) throw InvalidArgument("target point " + p.to_string() + " is not in the dilated window");
    mask[*idx] = true;
  }
  return mask;
}

}  // namespace

void for_each_injective(const PatternSpace& space, const ChoiceVisitor& visit) {
  Enumerator(space, std::vector<bool>(space.cols(), true), std::vector<bool>(space.cols(), false), visit).run();
}

void for_each_admissible(const PatternSpace& space, const ChoiceVisitor& visit) {
  std::vector<bool> must(space.cols());
  for (std::size_t c = 0; c < space.cols(); ++c) must[c] = space.is_required(c);
  Enumerator(space, std::vector<bool>(space.cols(), true), std::move(must), visit).run();
}

void for_each_with_image(const PatternSpace& space, const Window& image, const ChoiceVisitor& visit) {
  std::vector<bool> mask = image_mask(space, image);
  Enumerator(space, mask, mask, visit).run();
}

std::vector<LatticePoint> Pattern::targets(const Window& F) const {
  if (displacement.size() != F.size()) throw InvalidArgument("pattern does not match window size");
  std::vector<LatticePoint> out;
  out.reserve(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) out.push_back(F[i] + displacement[i]);
  return out;
}

Window Pattern::image(const Window& F) const { return Window::collect(targets(F)); }

Pattern to_pattern(const PatternSpace& space, std::span<const std::size_t> choice) {
  Pattern p;
  p.displacement.reserve(choice.size());
  for (std::size_t k : choice) p.displacement.push_back(space.displacements()[k]);
  return p;
}

namespace {

template <class Runner>
std::vector<Pattern> collect_patterns(const PatternSpace& space, Runner run) {
  std::vector<Pattern> out;
  run([&](std::span<const std::size_t> choice) { out.push_back(to_pattern(space, choice)); });
  return out;
}

}  // namespace

std::vector<Pattern> enumerate_injective(const Window& A, const Window& F) {
  PatternSpace space(A, F);
  return collect_patterns(space, [&](const ChoiceVisitor& v) { for_each_injective(space, v); });
}

std::vector<Pattern> enumerate_admissible(const Window& A, const Window& F) {
  PatternSpace space(A, F);
  return collect_patterns(space, [&](const ChoiceVisitor& v) { for_each_admissible(space, v); });
}

std::vector<Pattern> enumerate_with_image(const Window& A, const Window& F, const Window& image) {
  PatternSpace space(A, F);
  return collect_patterns(space, [&](const ChoiceVisitor& v) { for_each_with_image(space, image, v); });
}

void for_each_target_set(const Window& A, const Window& F, bool require_interior,
                         const std::function<void(const Window&)>& visit) {
  const PatternSpace space(A, F);
  const std::size_t n = space.cols();
  const std::size_t m = space.rows();
  std::vector<std::size_t> pick(m);
  std::iota(pick.begin(), pick.end(), 0);
  const auto& FA = space.dilated().points();
  const std::size_t need = require_interior ? space.required().size() : 0;
  while (true) {
    bool ok = true;
    if (need > 0) {
      std::size_t covered = 0;
      for (std::size_t c : pick) covered += space.is_required(c) ? 1 : 0;
      ok = covered == need;
    }
    if (ok) {
      std::vector<LatticePoint> pts;
      pts.reserve(m);
      for (std::size_t c : pick) pts.push_back(FA[c]);
      visit(Window::from_points(std::move(pts)));
    }
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<Window> theta(const Window& A, const Window& F, bool require_interior) {
  std::vector<Window> out;
  for_each_target_set(A, F, require_interior, [&](const Window& w) { out.push_back(w); });
  return out;
}

int permutation_sign(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = perm[j]) seen[j] = true;
  }
  return (perm.size() - cycles) % 2 == 0 ? 1 : -1;
}

int choice_sign(std::span<const std::size_t> targets) {
  std::vector<std::size_t> order(targets.begin(), targets.end());
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> perm(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    perm[i] = static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), targets[i]) - order.begin());
  }
  return permutation_sign(perm);
}

int pattern_sign(const Window& F, const Pattern& x, const Window& image,
                 std::optional<std::span<const std::size_t>> relabel) {
  const std::vector<LatticePoint> t = x.targets(F);
  if (Window::collect(t) != image || image.size() != F.size()) {
    throw InvalidArgument("pattern image does not equal the given target set");
  }
  if (relabel && relabel->size() != F.size()) throw InvalidArgument("relabeling must have one entry per site");
  std::vector<std::size_t> perm(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const std::size_t rank = *image.index_of(t[i]);
    perm[i] = relabel ? (*relabel)[rank] : rank;
  }
  if (relabel) {
    std::vector<bool> hit(F.size(), false);
    for (std::size_t v : perm) {
      if (v >= F.size() || hit[v]) throw InvalidArgument("relabeling is not a permutation");
      hit[v] = true;
    }
  }
  return permutation_sign(perm);
}

}  // namespace permsft

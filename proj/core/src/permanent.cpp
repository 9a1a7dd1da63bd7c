#include "permsft/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

#include "permsft/error.hpp"
#include "permsft/parallel.hpp"
#include "permsft/patterns.hpp"

namespace permsft {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

WeightedBipartite WeightedBipartite::from_dense(const DenseMatrix& m) {
  WeightedBipartite B(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double w = m(i, j);
      if (w < 0 || !std::isfinite(w)) throw InvalidArgument("matrix entries must be finite and nonnegative");
      if (w > 0) B.adjacency[i].emplace_back(j, w);
    }
  }
  return B;
}

DenseMatrix WeightedBipartite::to_dense() const {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (const auto& [j, w] : adjacency[i]) m(i, j) = w;
  }
  return m;
}

void WeightedBipartite::add(std::size_t row, std::size_t col, double weight) {
  if (row >= rows || col >= cols) throw InvalidArgument("matrix entry out of range");
  if (weight < 0 || !std::isfinite(weight)) throw InvalidArgument("matrix entries must be finite and nonnegative");
  if (weight == 0) return;
  auto& adj = adjacency[row];
  auto it = std::lower_bound(adj.begin(), adj.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != adj.end() && it->first == col) {
    it->second += weight;
  } else {
    adj.insert(it, {col, weight});
  }
}

std::size_t WeightedBipartite::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : adjacency) n += r.size();
  return n;
}

bool WeightedBipartite::is_zero_one() const {
  for (const auto& r : adjacency) {
    for (const auto& [c, w] : r) {
      if (w != 1.0) return false;
    }
  }
  return true;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kAuto: return "auto";
    case Backend::kRyser: return "ryser";
    case Backend::kBacktracking: return "backtracking";
    case Backend::kFrontier: return "frontier";
    case Backend::kInclusionExclusion: return "inclusion-exclusion";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) {
  for (Backend b : {Backend::kAuto, Backend::kRyser, Backend::kBacktracking, Backend::kFrontier,
                    Backend::kInclusionExclusion}) {
    if (backend_name(b) == name) return b;
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxRequiredForInclusionExclusion = 24;
constexpr std::size_t kMaxRyserColumns = 40;
constexpr std::size_t kRyserAutoColumns = 20;

/// Neumaier compensated sum.
struct CompensatedSum {
  long double sum = 0;
  long double comp = 0;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

/// Kernel output: an exact count (integer mode) or a log magnitude.
struct Raw {
  LogValue value;
  u128 count = 0;
  bool exact = false;
  double work = 0;
};

Raw zero_raw(bool exact) {
  Raw r;
  r.exact = exact;
  return r;
}

Raw one_raw(bool exact) {
  Raw r;
  r.exact = exact;
  r.count = 1;
  r.value = LogValue::one();
  return r;
}

LogValue log_of(u128 v) {
  if (v == 0) return LogValue::zero();
  return LogValue::from_log(std::log(static_cast<long double>(v)));
}

void charge(double& work, double amount, double budget, const char* kernel) {
  work += amount;
  if (work > budget) {
    throw CapacityError(std::string(kernel) + " work exceeds budget (" + std::to_string(static_cast<long long>(work)) +
                        " > " + std::to_string(static_cast<long long>(budget)) + ")");
  }
}

/// Divides each row by its largest weight; returns the summed log of the factors.
double normalize_rows(WeightedBipartite& B) {
  double log_scale = 0;
  for (auto& row : B.adjacency) {
    double m = 0;
    for (const auto& e : row) m = std::max(m, e.second);
    if (m == 0) continue;
    for (auto& e : row) e.second /= m;
    log_scale += std::log(m);
  }
  return log_scale;
}

// ---------------------------------------------------------------- Ryser

Raw ryser(const WeightedBipartite& input, bool exact, double budget) {
  const std::size_t m = input.rows;
  const std::size_t n = input.cols;
  if (m == 0) return one_raw(exact);
  for (const auto& row : input.adjacency) {
    if (row.empty()) return zero_raw(exact);
  }
  if (n > kMaxRyserColumns) throw CapacityError("Ryser backend limited to " + std::to_string(kMaxRyserColumns) + " columns");
  Raw out;
  out.exact = exact;
  charge(out.work, std::ldexp(static_cast<double>(m), static_cast<int>(n)), budget, "Ryser");

  WeightedBipartite B = input;
  const double log_scale = exact ? 0.0 : normalize_rows(B);
  // Column-major dense copy for the Gray code column flips.
  std::vector<double> col_vals(n * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, w] : B.adjacency[i]) col_vals[j * m + i] = w;
  }
  std::vector<std::vector<i128>> binom(n + 1, std::vector<i128>(n + 1, 0));
  for (std::size_t a = 0; a <= n; ++a) {
    binom[a][0] = 1;
    for (std::size_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
  }

  const std::size_t top_bits = std::min<std::size_t>(n, 6);
  const std::size_t low_bits = n - top_bits;
  const std::size_t chunks = std::size_t{1} << top_bits;
  const std::size_t inner = std::size_t{1} << low_bits;

  std::vector<long double> partial_real(chunks, 0.0L);
  std::vector<i128> partial_int(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<long double> sums(m, 0.0L);
    std::vector<i128> isums(m, 0);
    std::size_t size = 0;
    for (std::size_t b = 0; b < top_bits; ++b) {
      if (!((c >> b) & 1)) continue;
      const std::size_t col = low_bits + b;
      ++size;
      for (std::size_t i = 0; i < m; ++i) {
        sums[i] += col_vals[col * m + i];
        isums[i] += static_cast<i128>(col_vals[col * m + i]);
      }
    }
    std::uint64_t gray = 0;
    CompensatedSum acc;
    i128 iacc = 0;
    for (std::size_t k = 0;; ++k) {
      if (size <= m) {
        const bool negative = (m - size) % 2 == 1;
        const i128 coef = binom[n - size][m - size];
        if (exact) {
          i128 prod = coef;
          for (std::size_t i = 0; i < m && prod != 0; ++i) prod *= isums[i];
          iacc += negative ? -prod : prod;
        } else {
          long double prod = static_cast<long double>(coef);
          for (std::size_t i = 0; i < m && prod != 0; ++i) prod *= sums[i];
          acc.add(negative ? -prod : prod);
        }
      }
      if (k + 1 == inner) break;
      const std::size_t col = static_cast<std::size_t>(std::countr_zero(k + 1));
      const std::uint64_t bit = std::uint64_t{1} << col;
      gray ^= bit;
      const bool added = (gray & bit) != 0;
      size += added ? 1 : static_cast<std::size_t>(-1);
      const double* v = &col_vals[col * m];
      if (exact) {
        for (std::size_t i = 0; i < m; ++i) isums[i] += added ? static_cast<i128>(v[i]) : -static_cast<i128>(v[i]);
      } else {
        for (std::size_t i = 0; i < m; ++i) sums[i] += added ? v[i] : -v[i];
      }
    }
    partial_real[c] = acc.value();
    partial_int[c] = iacc;
  });

  if (exact) {
    const i128 total = tree_reduce(partial_int, i128{0}, [](i128 a, i128 b) { return a + b; });
    out.count = total > 0 ? static_cast<u128>(total) : 0;
    out.value = log_of(out.count);
  } else {
    const long double total = tree_reduce(partial_real, 0.0L, [](long double a, long double b) { return a + b; });
    out.value = total > 0 ? LogValue::from_log(static_cast<double>(std::log(total)) + log_scale) : LogValue::zero();
  }
  return out;
}

// ---------------------------------------------------------------- backtracking

class Backtracker {
 public:
  Backtracker(const WeightedBipartite& B, bool exact, double budget) : B_(B), exact_(exact), budget_(budget) {
    used_.assign(B.cols, false);
    closing_.resize(B.rows);
    std::vector<std::optional<std::size_t>> last(B.cols);
    for (std::size_t i = 0; i < B.rows; ++i) {
      for (const auto& e : B.adjacency[i]) last[e.first] = i;
    }
    for (std::size_t c = 0; c < B.cols; ++c) {
      if (!B.required[c]) continue;
      if (!last[c]) {
        infeasible_ = true;
      } else {
        closing_[*last[c]].push_back(c);
      }
    }
  }

  Raw run() {
    Raw out;
    out.exact = exact_;
    if (infeasible_) return out;
    descend(0, 1.0L);
    out.work = nodes_;
    if (exact_) {
      out.count = count_;
      out.value = log_of(count_);
    } else {
      const long double total = sum_.value();
      out.value = total > 0 ? LogValue::from_log(static_cast<double>(std::log(total))) : LogValue::zero();
    }
    return out;
  }

 private:
  void descend(std::size_t row, long double weight) {
    if (++nodes_ > budget_) {
      throw CapacityError("backtracking node count exceeds budget (" +
                          std::to_string(static_cast<long long>(budget_)) + ")");
    }
    if (row == B_.rows) {
      if (exact_) {
        ++count_;
      } else {
        sum_.add(weight);
      }
      return;
    }
    for (const auto& [col, w] : B_.adjacency[row]) {
      if (used_[col]) continue;
      used_[col] = true;
      bool feasible = true;
      for (std::size_t c : closing_[row]) {
        if (!used_[c]) {
          feasible = false;
          break;
        }
      }
      if (feasible) descend(row + 1, weight * w);
      used_[col] = false;
    }
  }

  const WeightedBipartite& B_;
  bool exact_;
  double budget_;
  bool infeasible_ = false;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> closing_;
  double nodes_ = 0;
  u128 count_ = 0;
  CompensatedSum sum_;
};

Raw backtracking(const WeightedBipartite& input, bool exact, double budget) {
  WeightedBipartite B = input;
  const double log_scale = exact ? 0.0 : normalize_rows(B);
  Raw r = Backtracker(B, exact, budget).run();
  if (!exact && !r.value.is_zero()) r.value = r.value * LogValue::from_log(log_scale);
  return r;
}

// ---------------------------------------------------------------- frontier DP

/// Frontier states: open-column masks with their summed weights.
template <class Weight>
struct StateList {
  std::vector<std::uint64_t> masks;
  std::vector<Weight> weights;
  std::size_t size() const { return masks.size(); }
};

/// Open-addressing accumulator from frontier masks to weights.
template <class Weight>
class StateTable {
 public:
  void reset(std::size_t expected) {
    std::size_t cap = 16;
    while (cap * 3 < expected * 4) cap <<= 1;
    keys_.assign(cap, 0);
    values_.assign(cap, Weight(0));
    used_.assign(cap, 0);
    size_ = 0;
  }

  void add(std::uint64_t key, Weight w) {
    if ((size_ + 1) * 4 > keys_.size() * 3) grow();
    const std::size_t h = slot_for(key);
    if (!used_[h]) {
      used_[h] = 1;
      keys_[h] = key;
      ++size_;
    }
    values_[h] += w;
  }

  std::size_t size() const { return size_; }

  /// Moves the entries into out in table order and releases the table.
  void extract(StateList<Weight>& out) {
    out.masks.clear();
    out.weights.clear();
    out.masks.shrink_to_fit();
    out.weights.shrink_to_fit();
    out.masks.reserve(size_);
    out.weights.reserve(size_);
    for (std::size_t h = 0; h < keys_.size(); ++h) {
      if (!used_[h]) continue;
      out.masks.push_back(keys_[h]);
      out.weights.push_back(values_[h]);
    }
    std::vector<std::uint64_t>().swap(keys_);
    std::vector<Weight>().swap(values_);
    std::vector<std::uint8_t>().swap(used_);
    size_ = 0;
  }

 private:
  std::size_t slot_for(std::uint64_t key) const {
    const std::size_t mask = keys_.size() - 1;
    std::size_t h = static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> 17) & mask;
    while (used_[h] && keys_[h] != key) h = (h + 1) & mask;
    return h;
  }

  void grow() {
    std::vector<std::uint64_t> keys(keys_.size() * 2, 0);
    std::vector<Weight> values(keys.size(), Weight(0));
    std::vector<std::uint8_t> used(keys.size(), 0);
    keys.swap(keys_);
    values.swap(values_);
    used.swap(used_);
    for (std::size_t h = 0; h < keys.size(); ++h) {
      if (!used[h]) continue;
      const std::size_t k = slot_for(keys[h]);
      used_[k] = 1;
      keys_[k] = keys[h];
      values_[k] = values[h];
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<Weight> values_;
  std::vector<std::uint8_t> used_;
  std::size_t size_ = 0;
};

/// Sweeps rows in order keeping, for each set of currently open columns that
/// are already used, the summed weight of all partial matchings. A column is
/// open from its first adjacent row to its last.
template <class Weight>
class FrontierSweep {
 public:
  FrontierSweep(const WeightedBipartite& B, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                double budget, double& work)
      : B_(B), rows_(rows), cols_(cols.size()), budget_(budget), work_(work) {
    activate_.resize(rows.size());
    close_.resize(rows.size());
    std::vector<std::size_t> local_row(B.rows, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) local_row[rows[i]] = i;
    first_.assign(B.cols, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> last(B.cols, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& e : B.adjacency[rows[i]]) {
        first_[e.first] = std::min(first_[e.first], i);
        last[e.first] = std::max(last[e.first], i);
      }
    }
    for (std::size_t c : cols) {
      activate_[first_[c]].push_back(c);
      close_[last[c]].push_back(c);
    }
    slot_.assign(B.cols, 0);
  }

  /// Returns the summed weight and adds the accumulated log scale to log_scale.
  Weight run(double& log_scale) {
    // A component can leave at most this many of its columns unmatched.
    const std::size_t slack = cols_ - rows_.size();
    StateList<Weight> states;
    states.masks = {0};
    states.weights = {Weight(1)};
    StateTable<Weight> next;
    double growth = 4;
    std::uint64_t free_slots = ~std::uint64_t{0};
    std::size_t closed = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t c : activate_[i]) {
        if (free_slots == 0) throw CapacityError("frontier width exceeds 64 open columns");
        const int s = std::countr_zero(free_slots);
        slot_[c] = s;
        free_slots &= ~(std::uint64_t{1} << s);
      }
      const auto& adj = B_.adjacency[rows_[i]];
      charge(work_, static_cast<double>(states.size()) * static_cast<double>(adj.size() + 1), budget_, "frontier");
      std::uint64_t required_bits = 0;
      std::uint64_t closing_bits = 0;
      for (std::size_t c : close_[i]) {
        const std::uint64_t bit = std::uint64_t{1} << slot_[c];
        closing_bits |= bit;
        if (B_.required[c]) required_bits |= bit;
      }
      closed += close_[i].size();
      // After this row, i + 1 columns are matched; those still open are counted by the mask.
      const std::size_t matched = i + 1;
      next.reset(static_cast<std::size_t>(static_cast<double>(states.size()) * std::min(growth, 4.0) * 1.05) + 1);
      for (std::size_t k = 0; k < states.size(); ++k) {
        const std::uint64_t mask = states.masks[k];
        const Weight w = states.weights[k];
        for (const auto& [c, weight] : adj) {
          const std::uint64_t bit = std::uint64_t{1} << slot_[c];
          if (mask & bit) continue;
          const std::uint64_t grown = mask | bit;
          if ((grown & required_bits) != required_bits) continue;
          const std::uint64_t kept = grown & ~closing_bits;
          const std::size_t unmatched_closed = closed - (matched - static_cast<std::size_t>(std::popcount(kept)));
          if (unmatched_closed > slack) continue;
          next.add(kept, w * Weight(weight));
        }
      }
      free_slots |= closing_bits;
      growth = std::max(1.0, static_cast<double>(next.size()) / static_cast<double>(states.size()));
      next.extract(states);
      if (states.size() == 0) return Weight(0);
      if constexpr (std::is_floating_point_v<Weight>) {
        Weight mx = 0;
        for (Weight v : states.weights) mx = std::max(mx, v);
        for (Weight& v : states.weights) v /= mx;
        log_scale += static_cast<double>(std::log(mx));
      }
    }
    Weight total = 0;
    for (Weight v : states.weights) total += v;
    return total;
  }

 private:
  const WeightedBipartite& B_;
  const std::vector<std::size_t>& rows_;
  std::size_t cols_;
  double budget_;
  double& work_;
  std::vector<std::size_t> first_;
  std::vector<std::vector<std::size_t>> activate_, close_;
  std::vector<int> slot_;
};

struct Components {
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::vector<std::size_t>> cols;
  bool infeasible = false;
};

Components connected_components(const WeightedBipartite& B) {
  std::vector<std::size_t> parent(B.rows + B.cols);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < B.rows; ++i) {
    for (const auto& e : B.adjacency[i]) {
      const std::size_t a = find(i), b = find(B.rows + e.first);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  Components out;
  std::vector<std::size_t> id(B.rows + B.cols, std::numeric_limits<std::size_t>::max());
  auto component_of = [&](std::size_t node) {
    const std::size_t root = find(node);
    if (id[root] == std::numeric_limits<std::size_t>::max()) {
      id[root] = out.rows.size();
      out.rows.emplace_back();
      out.cols.emplace_back();
    }
    return id[root];
  };
  for (std::size_t i = 0; i < B.rows; ++i) {
    if (B.adjacency[i].empty()) {
      out.infeasible = true;
      continue;
    }
    out.rows[component_of(i)].push_back(i);
  }
  for (std::size_t c = 0; c < B.cols; ++c) {
    const std::size_t root = find(B.rows + c);
    if (root == B.rows + c && id[root] == std::numeric_limits<std::size_t>::max()) {
      // Isolated column: unusable.
      if (B.required[c]) out.infeasible = true;
      continue;
    }
    out.cols[component_of(B.rows + c)].push_back(c);
  }
  return out;
}

Raw frontier(const WeightedBipartite& input, bool exact, double budget) {
  WeightedBipartite B = input;
  const double row_scale = exact ? 0.0 : normalize_rows(B);
  const Components comps = connected_components(B);
  Raw out;
  out.exact = exact;
  if (comps.infeasible) return out;
  u128 count = 1;
  double log_total = row_scale;
  for (std::size_t k = 0; k < comps.rows.size(); ++k) {
    if (comps.rows[k].size() > comps.cols[k].size()) return out;
    double log_scale = 0;
    if (exact) {
      FrontierSweep<u128> sweep(B, comps.rows[k], comps.cols[k], budget, out.work);
      const u128 c = sweep.run(log_scale);
      if (c == 0) return out;
      count *= c;
    } else {
      FrontierSweep<double> sweep(B, comps.rows[k], comps.cols[k], budget, out.work);
      const double v = sweep.run(log_scale);
      if (!(v > 0)) return out;
      log_total += std::log(v) + log_scale;
    }
  }
  if (exact) {
    out.count = count;
    out.value = log_of(count);
  } else {
    out.value = LogValue::from_log(log_total);
  }
  return out;
}

// ---------------------------------------------------------------- dispatch

Backend choose_unconstrained(const WeightedBipartite& B) {
  const double cells = static_cast<double>(B.rows) * static_cast<double>(B.cols);
  const double density = cells > 0 ? static_cast<double>(B.nonzeros()) / cells : 1.0;
  if (B.cols <= kRyserAutoColumns && density >= 0.5) return Backend::kRyser;
  return Backend::kFrontier;
}

bool has_required(const WeightedBipartite& B) {
  return std::any_of(B.required.begin(), B.required.end(), [](bool r) { return r; });
}

Raw run_unconstrained(const WeightedBipartite& B, Backend backend, bool exact, double budget) {
  switch (backend) {
    case Backend::kRyser: return ryser(B, exact, budget);
    case Backend::kBacktracking: return backtracking(B, exact, budget);
    default: return frontier(B, exact, budget);
  }
}

/// sum over S subset of R of (-1)^{|S|} per(B without columns S), with no
/// column required in the terms.
Raw inclusion_exclusion(const WeightedBipartite& B, Backend inner, bool exact, double budget) {
  std::vector<std::size_t> req;
  for (std::size_t c = 0; c < B.cols; ++c) {
    if (B.required[c]) req.push_back(c);
  }
  if (req.size() > kMaxRequiredForInclusionExclusion) {
    throw CapacityError("inclusion-exclusion limited to " + std::to_string(kMaxRequiredForInclusionExclusion) +
                        " required columns, got " + std::to_string(req.size()));
  }
  const std::size_t terms = std::size_t{1} << req.size();
  std::vector<Raw> results(terms);
  parallel_for(terms, [&](std::size_t mask) {
    WeightedBipartite sub(B.rows, B.cols);
    std::vector<bool> dropped(B.cols, false);
    for (std::size_t k = 0; k < req.size(); ++k) {
      if ((mask >> k) & 1) dropped[req[k]] = true;
    }
    for (std::size_t i = 0; i < B.rows; ++i) {
      for (const auto& e : B.adjacency[i]) {
        if (!dropped[e.first]) sub.adjacency[i].push_back(e);
      }
    }
    const Backend b = inner == Backend::kAuto ? choose_unconstrained(sub) : inner;
    results[mask] = run_unconstrained(sub, b, exact, budget);
  });
  Raw out;
  out.exact = exact;
  for (const auto& r : results) out.work += r.work;
  if (out.work > budget) throw CapacityError("inclusion-exclusion work exceeds budget");
  if (exact) {
    std::vector<i128> signed_counts(terms);
    for (std::size_t mask = 0; mask < terms; ++mask) {
      const i128 c = static_cast<i128>(results[mask].count);
      signed_counts[mask] = std::popcount(mask) % 2 ? -c : c;
    }
    const i128 total = tree_reduce(signed_counts, i128{0}, [](i128 a, i128 b) { return a + b; });
    out.count = total > 0 ? static_cast<u128>(total) : 0;
    out.value = log_of(out.count);
    return out;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) top = std::max(top, r.value.log());
  if (std::isinf(top)) return out;
  std::vector<long double> parts(terms);
  long double magnitude = 0;
  for (std::size_t mask = 0; mask < terms; ++mask) {
    const long double v = results[mask].value.is_zero() ? 0.0L : std::exp(static_cast<long double>(results[mask].value.log() - top));
    parts[mask] = std::popcount(mask) % 2 ? -v : v;
    magnitude += v;
  }
  const long double total = tree_reduce(parts, 0.0L, [](long double a, long double b) { return a + b; });
  // Anything at rounding level of the summed magnitudes is an exact zero.
  if (total <= magnitude * 1e-12L) return out;
  out.value = LogValue::from_log(static_cast<double>(std::log(total)) + top);
  return out;
}

}  // namespace

PermanentValue matrix_permanent(const WeightedBipartite& B, const PermanentOptions& opts) {
  if (B.adjacency.size() != B.rows || B.required.size() != B.cols) {
    throw InvalidArgument("bipartite matrix has inconsistent dimensions");
  }
  if (B.rows > B.cols) {
    throw InvalidArgument("permanent needs rows <= cols (" + std::to_string(B.rows) + " > " + std::to_string(B.cols) + ")");
  }
  for (const auto& row : B.adjacency) {
    for (const auto& [c, w] : row) {
      if (c >= B.cols || !(w > 0) || !std::isfinite(w)) throw InvalidArgument("invalid matrix entry");
    }
  }
  if (opts.integer_mode && !B.is_zero_one()) throw InvalidArgument("integer mode needs a 0-1 matrix");
  const bool exact = opts.integer_mode;
  const bool constrained = has_required(B);

  Backend used = opts.backend;
  Raw raw;
  switch (opts.backend) {
    case Backend::kAuto:
      used = constrained ? Backend::kFrontier : choose_unconstrained(B);
      raw = used == Backend::kRyser ? ryser(B, exact, opts.budget) : frontier(B, exact, opts.budget);
      break;
    case Backend::kRyser:
      raw = constrained ? inclusion_exclusion(B, Backend::kRyser, exact, opts.budget) : ryser(B, exact, opts.budget);
      break;
    case Backend::kBacktracking:
      raw = backtracking(B, exact, opts.budget);
      break;
    case Backend::kFrontier:
      raw = frontier(B, exact, opts.budget);
      break;
    case Backend::kInclusionExclusion:
      raw = inclusion_exclusion(B, Backend::kAuto, exact, opts.budget);
      break;
  }
  PermanentValue out;
  out.value = raw.value;
  out.backend = used;
  out.work = raw.work;
  if (exact && raw.count <= std::numeric_limits<std::uint64_t>::max()) out.count = static_cast<std::uint64_t>(raw.count);
  return out;
}

namespace {

void check_permanent_input(const GroupRingElement& f, const Window& A, const Window& F) {
  if (f.is_zero()) throw InvalidArgument("permanent of the zero element");
  if (!f.is_nonnegative()) throw InvalidArgument("permanent needs nonnegative coefficients");
  if (A.empty() || F.empty()) throw InvalidArgument("displacement set and window must be nonempty");
  if (f.dim() != A.dim() || f.dim() != F.dim()) throw InvalidArgument("element, displacement set, window differ in dimension");
  for (const auto& [s, c] : f.terms()) {
    if (!A.contains(s)) throw InvalidArgument("support point " + s.to_string() + " is not in the displacement set");
  }
}

}  // namespace

WeightedBipartite pattern_matrix(const GroupRingElement& f, const Window& A, const Window& F, bool require_interior) {
  check_permanent_input(f, A, F);
  const PatternSpace space(A, F);
  WeightedBipartite B(space.rows(), space.cols());
  std::vector<double> weight(space.choices());
  for (std::size_t k = 0; k < space.choices(); ++k) weight[k] = f.coef(A[k]);
  for (std::size_t i = 0; i < space.rows(); ++i) {
    for (std::size_t k = 0; k < space.choices(); ++k) {
      if (weight[k] > 0) B.add(i, space.target(i, k), weight[k]);
    }
  }
  if (require_interior) {
    for (std::size_t c = 0; c < space.cols(); ++c) B.required[c] = space.is_required(c);
  }
  return B;
}

PermanentValue iper_AF(const GroupRingElement& f, const Window& A, const Window& F, const PermanentOptions& opts) {
  return matrix_permanent(pattern_matrix(f, A, F, false), opts);
}

PermanentValue per_AF(const GroupRingElement& f, const Window& A, const Window& F, const PermanentOptions& opts) {
  return matrix_permanent(pattern_matrix(f, A, F, true), opts);
}

WeightedBipartite torus_matrix(const GroupRingElement& f, const TorusQuotient& q) {
  if (f.dim() != q.dim()) throw InvalidArgument("element dimension does not match torus");
  if (!f.is_nonnegative()) throw InvalidArgument("torus permanent needs nonnegative coefficients");
  WeightedBipartite B(q.order(), q.order());
  for (std::size_t t = 0; t < q.order(); ++t) {
    const LatticePoint base = q.element(t);
    for (const auto& [s, c] : f.terms()) B.add(t, q.index_of(base + s), c);
  }
  return B;
}

Window extension_sites(const Window& A, const Window& F) {
  return dilate(F, set_union(A, Window::from_points({LatticePoint::zero(A.dim())})));
}

DenseMatrix doubly_stochastic_extension(const GroupRingElement& f, const Window& A, const Window& F) {
  check_permanent_input(f, A, F);
  if (std::fabs(f.l1_norm() - 1.0) > 1e-12) throw InvalidArgument("doubly stochastic extension needs ||f||_1 = 1");
  const Window sites = extension_sites(A, F);
  DenseMatrix C(sites.size(), sites.size());
  const Window outside = set_difference(sites, F);
  for (const auto& [s, w] : f.terms()) {
    for (const auto& t : F) C(*sites.index_of(t), *sites.index_of(t + s)) += w;
    const Window free_targets = set_difference(sites, F.translated(s));
    for (std::size_t k = 0; k < outside.size(); ++k) {
      C(*sites.index_of(outside[k]), *sites.index_of(free_targets[k])) += w;
    }
  }
  return C;
}

double log_bregman_bound(const DenseMatrix& B) {
  if (B.rows != B.cols) throw InvalidArgument("Bregman bound needs a square matrix");
  double total = 0;
  for (std::size_t i = 0; i < B.rows; ++i) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < B.cols; ++j) {
      const double v = B(i, j);
      if (v != 0.0 && v != 1.0) throw InvalidArgument("Bregman bound needs a 0-1 matrix");
      r += v == 1.0 ? 1 : 0;
    }
    if (r == 0) return -std::numeric_limits<double>::infinity();
    total += std::lgamma(static_cast<double>(r) + 1.0) / static_cast<double>(r);
  }
  return total;
}

double bregman_bound(const DenseMatrix& B) { return std::exp(log_bregman_bound(B)); }

double vdw_bound(std::size_t n) {
  if (n == 0) return 1.0;
  const double nd = static_cast<double>(n);
  return std::exp(std::lgamma(nd + 1.0) - nd * std::log(nd));
}

PermanentValue dense_permanent(const DenseMatrix& m, const PermanentOptions& opts) {
  return matrix_permanent(WeightedBipartite::from_dense(m), opts);
}

}  // namespace permsft

#include "permsft/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permsft/error.hpp"

namespace permsft {

namespace {

constexpr std::size_t kMaxSpan = 22;

/// Tarjan's algorithm, iterative. Returns component id per state.
std::vector<std::size_t> strongly_connected(const TransferMatrix& T, std::size_t& count) {
  const std::size_t n = T.states();
  const auto& adj = T.transitions();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t next_index = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adj[v].size()) {
        const std::size_t w = adj[v][edge++].first;
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        while (true) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
          if (w == done) break;
        }
        ++count;
      }
    }
  }
  return comp;
}

struct Block {
  std::vector<std::size_t> members;
  /// Local adjacency restricted to the block.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
};

std::vector<Block> cyclic_blocks(const TransferMatrix& T) {
  std::size_t count = 0;
  const std::vector<std::size_t> comp = strongly_connected(T, count);
  std::vector<Block> blocks(count);
  std::vector<std::size_t> local(T.states());
  for (std::size_t s = 0; s < T.states(); ++s) {
    local[s] = blocks[comp[s]].members.size();
    blocks[comp[s]].members.push_back(s);
  }
  for (auto& b : blocks) {
    b.adj.resize(b.members.size());
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      for (const auto& [t, w] : T.transitions()[b.members[i]]) {
        if (comp[t] == comp[b.members[i]]) b.adj[i].emplace_back(local[t], w);
      }
    }
  }
  std::erase_if(blocks, [](const Block& b) {
    for (const auto& row : b.adj) {
      if (!row.empty()) return false;
    }
    return true;
  });
  return blocks;
}

}  // namespace

TransferMatrix TransferMatrix::build(const GroupRingElement& f) {
  if (f.is_zero()) throw InvalidArgument("transfer matrix of the zero element");
  if (f.dim() != 1) throw InvalidArgument("transfer matrix needs a one-dimensional element");
  if (!f.is_nonnegative()) throw InvalidArgument("transfer matrix needs nonnegative coefficients");
  TransferMatrix T;
  T.shift_ = f.terms().begin()->first[0];
  T.span_ = static_cast<std::size_t>(f.terms().rbegin()->first[0] - T.shift_);
  if (T.span_ > kMaxSpan) throw CapacityError("transfer matrix span " + std::to_string(T.span_) + " exceeds " +
                                              std::to_string(kMaxSpan));
  T.zero_one_ = f.is_indicator();
  std::vector<std::pair<std::size_t, double>> moves;
  for (const auto& [s, c] : f.terms()) moves.emplace_back(static_cast<std::size_t>(s[0] - T.shift_), c);
  const std::size_t n = std::size_t{1} << T.span_;
  T.transitions_.resize(n);
  for (std::size_t state = 0; state < n; ++state) {
    for (const auto& [a, w] : moves) {
      const std::size_t bit = std::size_t{1} << a;
      if (state & bit) continue;
      const std::size_t claimed = state | bit;
      if (!(claimed & 1)) continue;
      T.transitions_[state].emplace_back(static_cast<std::uint32_t>(claimed >> 1), w);
    }
  }
  return T;
}

PerronResult perron(const TransferMatrix& T, double rel_tol, std::size_t max_iterations) {
  PerronResult best;
  best.log_radius = best.log_lower = best.log_upper = -std::numeric_limits<double>::infinity();
  best.converged = true;
  for (const Block& b : cyclic_blocks(T)) {
    const std::size_t n = b.members.size();
    // Power iteration on the primitive matrix B + I.
    std::vector<double> v(n, 1.0), next(n);
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    bool converged = false;
    for (; it < max_iterations; ++it) {
      lo = std::numeric_limits<double>::infinity();
      hi = 0;
      double mx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = v[i];
        for (const auto& [j, w] : b.adj[i]) s += w * v[j];
        next[i] = s;
        lo = std::min(lo, s / v[i]);
        hi = std::max(hi, s / v[i]);
        mx = std::max(mx, s);
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = next[i] / mx;
      if (hi - lo <= rel_tol * (lo - 1.0) || hi - lo <= 1e-15 * hi) {
        converged = true;
        break;
      }
    }
    const double rho_lo = std::max(lo - 1.0, 0.0);
    const double rho_hi = hi - 1.0;
    const double rho = 0.5 * (rho_lo + rho_hi);
    best.converged = best.converged && converged;
    best.iterations = std::max(best.iterations, it);
    if (std::log(rho) > best.log_radius) {
      best.log_radius = std::log(rho);
      best.log_lower = std::log(rho_lo);
      best.log_upper = std::log(rho_hi);
    }
  }
  return best;
}

LogValue trace_power(const TransferMatrix& T, std::size_t n) {
  if (n == 0) return LogValue::from_linear(static_cast<double>(T.states()));
  LogValue total = LogValue::zero();
  for (const Block& b : cyclic_blocks(T)) {
    const std::size_t m = b.members.size();
    std::vector<double> v(m), next(m);
    for (std::size_t start = 0; start < m; ++start) {
      std::fill(v.begin(), v.end(), 0.0);
      v[start] = 1.0;
      double log_scale = 0;
      bool alive = true;
      for (std::size_t step = 0; step < n && alive; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
          if (v[i] == 0) continue;
          for (const auto& [j, w] : b.adj[i]) next[j] += v[i] * w;
        }
        const double mx = *std::max_element(next.begin(), next.end());
        if (mx == 0) {
          alive = false;
          break;
        }
        for (std::size_t i = 0; i < m; ++i) v[i] = next[i] / mx;
        log_scale += std::log(mx);
      }
      if (alive && v[start] > 0) total = total + LogValue::from_log(std::log(v[start]) + log_scale);
    }
  }
  return total;
}

std::optional<std::uint64_t> trace_power_count(const TransferMatrix& T, std::size_t n) {
  if (!T.zero_one()) throw InvalidArgument("exact trace needs 0-1 weights");
  __extension__ typedef unsigned __int128 u128;
  if (n == 0) return T.states();
  u128 total = 0;
  constexpr u128 kLimit = static_cast<u128>(std::numeric_limits<std::uint64_t>::max());
  for (const Block& b : cyclic_blocks(T)) {
    const std::size_t m = b.members.size();
    std::vector<u128> v(m), next(m);
    for (std::size_t start = 0; start < m; ++start) {
      std::fill(v.begin(), v.end(), 0);
      v[start] = 1;
      for (std::size_t step = 0; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t i = 0; i < m; ++i) {
          if (v[i] == 0) continue;
          for (const auto& [j, w] : b.adj[i]) next[j] += v[i];
        }
        for (std::size_t i = 0; i < m; ++i) {
          if (next[i] > kLimit) return std::nullopt;
        }
        v.swap(next);
      }
      total += v[start];
      if (total > kLimit) return std::nullopt;
    }
  }
  return static_cast<std::uint64_t>(total);
}

double transfer_pressure_Z(const GroupRingElement& f) { return perron(TransferMatrix::build(f)).log_radius; }

}  // namespace permsft

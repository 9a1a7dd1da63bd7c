#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "permsft/group_ring.hpp"
#include "permsft/log_value.hpp"

namespace permsft {

/// Profile transfer matrix for weighted restricted permutations of Z.
///
/// After translating supp(f) into {0, ..., K} with 0 in the support, a state
/// is the set of offsets in {0, ..., K-1} ahead of the current site that are
/// already claimed. At a site a displacement a is allowed if offset a is
/// unclaimed; the site itself must be claimed afterwards, then the profile
/// shifts by one.
class TransferMatrix {
 public:
  static TransferMatrix build(const GroupRingElement& f);

  std::size_t span() const noexcept { return span_; }
  std::size_t states() const noexcept { return transitions_.size(); }
  /// Exponent subtracted from f before building.
  std::int64_t shift() const noexcept { return shift_; }
  bool zero_one() const noexcept { return zero_one_; }
  /// Outgoing (target state, weight) pairs per state.
  const std::vector<std::vector<std::pair<std::uint32_t, double>>>& transitions() const noexcept { return transitions_; }

 private:
  std::size_t span_ = 0;
  std::int64_t shift_ = 0;
  bool zero_one_ = false;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> transitions_;
};

struct PerronResult {
  double log_radius = 0;  ///< log of the spectral radius
  double log_lower = 0;   ///< certified bracket from the Collatz-Wielandt quotients
  double log_upper = 0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Spectral radius by power iteration on each strongly connected block.
PerronResult perron(const TransferMatrix& T, double rel_tol = 1e-13, std::size_t max_iterations = 2000000);

/// trace(T^n) in the log domain.
LogValue trace_power(const TransferMatrix& T, std::size_t n);
/// Exact trace(T^n) for 0-1 weights; nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> trace_power_count(const TransferMatrix& T, std::size_t n);

/// Pressure of a nonnegative element over Z: log of the Perron root.
double transfer_pressure_Z(const GroupRingElement& f);

}  // namespace permsft

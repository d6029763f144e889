#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ksector/metric.hpp"
#include "ksector/region_mask.hpp"

namespace ksector {

/// Points at least as close to `x` as to `y` (ties included).
RegionMask dom(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec = {});
/// Points equidistant from `x` and `y`; equals dom(x, y) & dom(y, x).
RegionMask bisect(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec = {});

/// An element of the lattice of region tuples: sites P, Q and pairs (R_i, S_i)
/// for i = 1..k-1 with P subset R_i, Q subset S_i and R_i | S_i = domain.
/// Indices follow the usual convention: R(0) is P and S(k) is Q.
class GradationState {
 public:
  /// Throws InvalidState (lattice invariants), EmptySite, SitesOverlap.
  GradationState(SpacePtr space, RegionMask p, RegionMask q, int k, std::vector<RegionMask> r,
                 std::vector<RegionMask> s);

  int k() const noexcept { return k_; }
  const Space& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const RegionMask& P() const noexcept { return p_; }
  const RegionMask& Q() const noexcept { return q_; }
  /// R(0) = P, R(i) for 1 <= i <= k-1.
  const RegionMask& R(int i) const;
  /// S(k) = Q, S(i) for 1 <= i <= k-1.
  const RegionMask& S(int i) const;

  GradationState with_R(int i, RegionMask r) const;
  GradationState with_S(int i, RegionMask s) const;

  /// Same sites, k, and space (compared by value).
  bool compatible_with(const GradationState& other) const;
  bool operator==(const GradationState& other) const;

 private:
  void validate() const;

  SpacePtr space_;
  RegionMask p_;
  RegionMask q_;
  int k_;
  std::vector<RegionMask> r_;  // r_[i - 1] = R_i
  std::vector<RegionMask> s_;
};

GradationState bottom(SpacePtr space, const RegionMask& p, const RegionMask& q, int k);
GradationState top(SpacePtr space, const RegionMask& p, const RegionMask& q, int k);

/// R_i subset R'_i and S_i superset S'_i for all i. Throws IncompatibleStates.
bool leq(const GradationState& a, const GradationState& b);

/// The monotone operator (R_i, S_i) -> (dom(R_{i-1}, S_{i+1}), dom(S_{i+1}, R_{i-1})).
GradationState apply_F(const GradationState& s, const Exec& exec = {});

/// Exchanges the roles of the sites: (R_i, S_i)_i of (P, Q) becomes
/// (S_{k-i}, R_{k-i})_i of (Q, P). Order-reversing and commutes with apply_F.
GradationState dual(const GradationState& s);

enum class Direction { Ascending, Descending };

struct FixpointResult {
  GradationState state;
  int iterations = 0;
  bool converged = false;
  /// changed[n][i-1]: cells of R_i plus cells of S_i that changed in step n. A converged
  /// run ends with the all-zero row of the step that confirmed stabilization.
  std::vector<std::vector<std::size_t>> changed;
};

/// 10 * (width + height) on grids; the lattice height 2 (k - 1) n + 1 on finite spaces.
int default_max_iters(const Space& space, int k);

/// Applies F until exact stabilization or `max_iters` steps. Ascending requires
/// leq(start, F(start)), descending leq(F(start), start); throws NotPreFixpoint
/// otherwise. The chain property is checked at every step.
FixpointResult iterate(const GradationState& start, Direction direction, int max_iters, const Exec& exec = {});

struct GradationCheck {
  bool ok = false;
  /// Cells where apply_F differs from the state, per slot i = 1..k-1.
  std::vector<std::size_t> r_mismatch;
  std::vector<std::size_t> s_mismatch;
};

GradationCheck is_gradation(const GradationState& s, const Exec& exec = {});

}  // namespace ksector

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ksector/lattice.hpp"
#include "ksector/sectors.hpp"

namespace ksector {

struct Witness {
  std::size_t index = 0;  // cell or point index
  std::string what;
  double value = 0.0;

  bool operator==(const Witness&) const = default;
};

/// Result of one executable check. A failed report always carries witnesses
/// that can be re-checked independently.
struct CheckReport {
  std::string name;
  bool passed = true;
  std::vector<Witness> witnesses;
  std::map<std::string, double> summary;
  std::vector<std::string> notes;

  void fail(Witness w);
  bool operator==(const CheckReport&) const = default;
};

/// Witness lists are truncated to this many entries; summaries keep full counts.
inline constexpr std::size_t kMaxWitnesses = 64;

/// Default residual tolerance: 1.5 cells on grids, exact on explicit spaces.
double default_tolerance(const Space& space);

/// Residual max_i max_{x in C_i} |dist(x, C_{i-1}) - dist(x, C_{i+1})| with C_0 = P,
/// C_k = Q; passes iff <= tol. On explicit spaces also requires the exact set equality
/// C_i = bisect(C_{i-1}, C_{i+1}). Throws EmptyInput on an empty slot.
CheckReport check_sector(const Space& space, const std::vector<RegionMask>& sectors, const RegionMask& p,
                         const RegionMask& q, double tol, const Exec& exec = {});
CheckReport check_sector(const Space& space, const SectorSet& sectors, const RegionMask& p, const RegionMask& q,
                         double tol, const Exec& exec = {});

/// C_{i-1} and C_{i+1} disjoint for every i (with C_0 = P, C_k = Q).
CheckReport check_separated(const std::vector<RegionMask>& sectors, const RegionMask& p, const RegionMask& q);
/// R_i and S_j disjoint for all 0 <= i < j <= k.
CheckReport check_separated(const GradationState& s);

/// P = R_0 subset R_1 subset ... subset R_{k-1} and S_1 superset ... superset S_k = Q.
CheckReport check_chain(const GradationState& s);

/// k = 3 only (NotApplicable otherwise): (R_1, S_2) is a zone diagram and
/// R_2 = dom(R_1, Q), S_1 = dom(S_2, P).
CheckReport check_zone_diagram(const GradationState& s, const Exec& exec = {});

/// Grid form of dom(y, x) = closure(complement of dom(x, y)): every cell of dom(y, x) lies
/// within one 8-neighbour step of a cell outside dom(x, y). Throws PreconditionViolated
/// unless x, y are nonempty and disjoint; NotApplicable on explicit spaces.
CheckReport check_boundary_lemma(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec = {});

/// With D = dom(x, y), C = bisect(x, y) and z disjoint from D: dom(D, z) versus dom(C, z)
/// and dom(z, D) versus dom(z, C). Exact on explicit spaces; on grids a differing cell
/// passes if it is within one 8-neighbour step of the boundary of dom(D, z) resp. dom(z, D).
CheckReport check_dom_properties(const Space& space, const RegionMask& x, const RegionMask& y, const RegionMask& z,
                                 const Exec& exec = {});

struct OracleLimits {
  std::uint64_t budget = 17'000'000;  // max (2^n - 1)^(k-1) candidate tuples
  Exec exec{};
};

/// (2^n - 1)^(k-1), saturating at UINT64_MAX.
std::uint64_t oracle_candidate_count(std::size_t n, int k);

/// Every (k-1)-tuple of nonempty subsets with C_i = bisect(C_{i-1}, C_{i+1}) exactly,
/// in lexicographic order of subset bitmasks (point j is bit j). Explicit spaces only;
/// throws BudgetExceeded when the candidate count exceeds the budget or n > 16.
std::vector<SectorSet> brute_force_ksectors(const Space& space, const RegionMask& p, const RegionMask& q, int k,
                                            const OracleLimits& limits = {});

/// Cross-checks least and greatest fixed points against the oracle: an extraction that
/// passes check_sector exactly must appear in the oracle output. Nonexistence (empty
/// oracle output and no extraction passing) is recorded as a note, not a failure.
CheckReport check_consistency(const SpacePtr& space, const RegionMask& p, const RegionMask& q, int k,
                              const OracleLimits& limits = {});

}  // namespace ksector

// Exhaustive k-sector enumeration on small explicit spaces.

#include <cstdint>
#include <limits>
#include <string>

#include "ksector/error.hpp"
#include "ksector/verify.hpp"

namespace ksector {
namespace {

constexpr std::size_t kMaxOraclePoints = 16;

using Subset = std::uint32_t;

class SubsetTable {
 public:
  SubsetTable(const Space& space) : n_(space.size()), dist_((std::size_t{1} << n_) * n_, kUnreachable) {
    std::vector<DistanceField> rows(n_);
    for (std::size_t j = 0; j < n_; ++j) rows[j] = space.distance_field(RegionMask::from_indices(n_, {j}));
    // dist(X, z) = min(dist(X minus lowest point, z), dist(lowest point, z))
    for (Subset x = 1; x < (Subset{1} << n_); ++x) {
      const int low = std::countr_zero(x);
      const Subset rest = x & (x - 1);
      for (std::size_t z = 0; z < n_; ++z) {
        const std::int64_t d = rows[static_cast<std::size_t>(low)].values[z];
        dist_[x * n_ + z] = rest == 0 ? d : std::min(d, dist_[rest * n_ + z]);
      }
    }
  }

  Subset bisect(Subset x, Subset y) const {
    Subset out = 0;
    for (std::size_t z = 0; z < n_; ++z)
      if (dist_[x * n_ + z] == dist_[y * n_ + z]) out |= Subset{1} << z;
    return out;
  }

 private:
  std::size_t n_;
  std::vector<std::int64_t> dist_;
};

Subset to_subset(const RegionMask& m) {
  Subset out = 0;
  m.for_each([&](std::size_t i) { out |= Subset{1} << i; });
  return out;
}

RegionMask to_mask(Subset s, std::size_t n) {
  RegionMask m(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((s >> i) & 1u) m.set(i);
  return m;
}

// Depth-first search over C_1..C_{k-1}; equation i is tested as soon as C_{i+1} is fixed.
void extend(const SubsetTable& table, Subset full, std::vector<Subset>& chain, int k, Subset q,
            std::vector<std::vector<Subset>>& out) {
  const int i = static_cast<int>(chain.size()) - 1;  // last chosen slot
  if (i == k - 1) {
    if (table.bisect(chain[static_cast<std::size_t>(k - 2)], q) == chain[static_cast<std::size_t>(k - 1)])
      out.emplace_back(chain.begin() + 1, chain.end());
    return;
  }
  for (Subset next = 1; next <= full; ++next) {
    if (i >= 1 && table.bisect(chain[static_cast<std::size_t>(i - 1)], next) != chain[static_cast<std::size_t>(i)])
      continue;
    chain.push_back(next);
    extend(table, full, chain, k, q, out);
    chain.pop_back();
  }
}

}  // namespace

std::uint64_t oracle_candidate_count(std::size_t n, int k) {
  if (n >= 64) return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t per_slot = (std::uint64_t{1} << n) - 1;
  std::uint64_t total = 1;
  for (int i = 1; i < k; ++i) {
    if (per_slot != 0 && total > std::numeric_limits<std::uint64_t>::max() / per_slot)
      return std::numeric_limits<std::uint64_t>::max();
    total *= per_slot;
  }
  return total;
}

std::vector<SectorSet> brute_force_ksectors(const Space& space, const RegionMask& p, const RegionMask& q, int k,
                                            const OracleLimits& limits) {
  if (!space.is_explicit()) throw Error(ErrorCode::NotApplicable, "oracle needs an explicit finite space");
  if (k < 2) throw Error(ErrorCode::InvalidState, "k must be at least 2");
  const std::size_t n = space.size();
  const std::uint64_t candidates = oracle_candidate_count(n, k);
  if (n > kMaxOraclePoints || candidates > limits.budget)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(candidates) + " candidates for n = " + std::to_string(n) +
                                               ", k = " + std::to_string(k) + " exceed budget " +
                                               std::to_string(limits.budget));
  if (p.empty() || q.empty()) throw Error(ErrorCode::EmptySite, "sites must be nonempty");
  if (p.intersects(q)) throw Error(ErrorCode::SitesOverlap, "sites must be disjoint");

  const SubsetTable table(space);
  const Subset full = static_cast<Subset>((std::uint64_t{1} << n) - 1);
  const Subset ps = to_subset(p), qs = to_subset(q);

  // One bucket per choice of C_1 so the merged order is lexicographic regardless of threads.
  std::vector<std::vector<std::vector<Subset>>> buckets(full);
  parallel_for(1, static_cast<std::size_t>(full) + 1, limits.exec, [&](std::size_t first) {
    std::vector<Subset> chain{ps, static_cast<Subset>(first)};
    if (k == 2) {
      if (table.bisect(ps, qs) == chain[1]) buckets[first - 1].push_back({chain[1]});
      return;
    }
    extend(table, full, chain, k, qs, buckets[first - 1]);
  });

  std::vector<SectorSet> out;
  for (const auto& bucket : buckets)
    for (const auto& tuple : bucket) {
      SectorSet set;
      set.k = k;
      for (Subset c : tuple) set.masks.push_back(to_mask(c, n));
      set.curves.resize(set.masks.size());
      out.push_back(std::move(set));
    }
  return out;
}

CheckReport check_consistency(const SpacePtr& space, const RegionMask& p, const RegionMask& q, int k,
                              const OracleLimits& limits) {
  CheckReport r;
  r.name = "consistency";
  const std::vector<SectorSet> oracle = brute_force_ksectors(*space, p, q, k, limits);
  r.summary["oracle_sectors"] = static_cast<double>(oracle.size());

  const int max_iters = default_max_iters(*space, k);
  const FixpointResult least = iterate(bottom(space, p, q, k), Direction::Ascending, max_iters, limits.exec);
  const FixpointResult greatest = iterate(top(space, p, q, k), Direction::Descending, max_iters, limits.exec);

  bool any_sector = false;
  for (const auto& [label, result] : {std::pair{"least", &least}, std::pair{"greatest", &greatest}}) {
    const std::string name = label;
    if (!result->converged) {
      r.fail({0, name + " iteration did not converge", static_cast<double>(result->iterations)});
      continue;
    }
    const std::vector<RegionMask> masks = sector_masks(result->state);
    bool nonempty = true;
    for (const RegionMask& m : masks) nonempty = nonempty && !m.empty();
    bool is_sector = false;
    if (nonempty) is_sector = check_sector(*space, masks, p, q, 0.0).passed;
    r.summary[name + "_is_sector"] = is_sector ? 1.0 : 0.0;
    if (!is_sector) continue;
    any_sector = true;
    bool found = false;
    for (const SectorSet& s : oracle) found = found || s.masks == masks;
    if (!found) r.fail({0, name + " fixed point yields a k-sector missing from the oracle output", 0.0});
  }
  if (oracle.empty() && !any_sector) r.notes.push_back("nonexistence confirmed");
  if (!oracle.empty() && !any_sector)
    r.notes.push_back("oracle found k-sectors but neither extremal gradation yields one");
  return r;
}

}  // namespace ksector

#include "ksector/lattice.hpp"

#include <string>

#include "ksector/error.hpp"

namespace ksector {
namespace {

RegionMask dom_from_fields(const Space& space, const DistanceField& dx, const DistanceField& dy) {
  RegionMask out(space.size());
  const RegionMask& domain = space.domain();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (domain.test(i) && dx.values[i] <= dy.values[i]) out.set(i);
  return out;
}

}  // namespace

RegionMask dom(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec) {
  return dom_from_fields(space, space.distance_field(x, exec), space.distance_field(y, exec));
}

RegionMask bisect(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec) {
  const DistanceField dx = space.distance_field(x, exec);
  const DistanceField dy = space.distance_field(y, exec);
  RegionMask out(space.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (space.domain().test(i) && dx.values[i] == dy.values[i]) out.set(i);
  return out;
}

GradationState::GradationState(SpacePtr space, RegionMask p, RegionMask q, int k, std::vector<RegionMask> r,
                               std::vector<RegionMask> s)
    : space_(std::move(space)), p_(std::move(p)), q_(std::move(q)), k_(k), r_(std::move(r)), s_(std::move(s)) {
  validate();
}

void GradationState::validate() const {
  if (!space_) throw Error(ErrorCode::InvalidState, "state has no space");
  if (k_ < 2) throw Error(ErrorCode::InvalidState, "k must be at least 2, got " + std::to_string(k_));
  const std::size_t n = space_->size();
  if (p_.size() != n || q_.size() != n) throw Error(ErrorCode::DimensionMismatch, "site masks do not match space");
  const RegionMask& domain = space_->domain();
  if (!p_.subset_of(domain) || !q_.subset_of(domain))
    throw Error(ErrorCode::InvalidState, "sites must lie inside the space domain");
  if (p_.empty() || q_.empty()) throw Error(ErrorCode::EmptySite, "sites must be nonempty");
  if (p_.intersects(q_)) throw Error(ErrorCode::SitesOverlap, "sites P and Q must be disjoint");
  const auto slots = static_cast<std::size_t>(k_ - 1);
  if (r_.size() != slots || s_.size() != slots)
    throw Error(ErrorCode::InvalidState, "expected " + std::to_string(slots) + " region pairs");
  for (std::size_t i = 0; i < slots; ++i) {
    const std::string slot = std::to_string(i + 1);
    if (r_[i].size() != n || s_[i].size() != n)
      throw Error(ErrorCode::DimensionMismatch, "region pair " + slot + " does not match space");
    if (!r_[i].subset_of(domain) || !s_[i].subset_of(domain))
      throw Error(ErrorCode::InvalidState, "region pair " + slot + " leaves the domain");
    if (!p_.subset_of(r_[i])) throw Error(ErrorCode::InvalidState, "P is not contained in R_" + slot);
    if (!q_.subset_of(s_[i])) throw Error(ErrorCode::InvalidState, "Q is not contained in S_" + slot);
    if ((r_[i] | s_[i]) != domain) throw Error(ErrorCode::InvalidState, "R_" + slot + " | S_" + slot + " != space");
  }
}

const RegionMask& GradationState::R(int i) const {
  if (i == 0) return p_;
  if (i < 1 || i >= k_) throw Error(ErrorCode::InvalidState, "R index out of range: " + std::to_string(i));
  return r_[static_cast<std::size_t>(i - 1)];
}

const RegionMask& GradationState::S(int i) const {
  if (i == k_) return q_;
  if (i < 1 || i >= k_) throw Error(ErrorCode::InvalidState, "S index out of range: " + std::to_string(i));
  return s_[static_cast<std::size_t>(i - 1)];
}

GradationState GradationState::with_R(int i, RegionMask r) const {
  auto rs = r_;
  if (i < 1 || i >= k_) throw Error(ErrorCode::InvalidState, "R index out of range: " + std::to_string(i));
  rs[static_cast<std::size_t>(i - 1)] = std::move(r);
  return GradationState(space_, p_, q_, k_, std::move(rs), s_);
}

GradationState GradationState::with_S(int i, RegionMask s) const {
  auto ss = s_;
  if (i < 1 || i >= k_) throw Error(ErrorCode::InvalidState, "S index out of range: " + std::to_string(i));
  ss[static_cast<std::size_t>(i - 1)] = std::move(s);
  return GradationState(space_, p_, q_, k_, r_, std::move(ss));
}

bool GradationState::compatible_with(const GradationState& other) const {
  return k_ == other.k_ && p_ == other.p_ && q_ == other.q_ &&
         (space_ == other.space_ || *space_ == *other.space_);
}

bool GradationState::operator==(const GradationState& other) const {
  return compatible_with(other) && r_ == other.r_ && s_ == other.s_;
}

GradationState bottom(SpacePtr space, const RegionMask& p, const RegionMask& q, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidState, "k must be at least 2");
  const RegionMask all = space->full();
  const auto slots = static_cast<std::size_t>(k - 1);
  return GradationState(space, p, q, k, std::vector<RegionMask>(slots, p), std::vector<RegionMask>(slots, all));
}

GradationState top(SpacePtr space, const RegionMask& p, const RegionMask& q, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidState, "k must be at least 2");
  const RegionMask all = space->full();
  const auto slots = static_cast<std::size_t>(k - 1);
  return GradationState(space, p, q, k, std::vector<RegionMask>(slots, all), std::vector<RegionMask>(slots, q));
}

bool leq(const GradationState& a, const GradationState& b) {
  if (!a.compatible_with(b)) throw Error(ErrorCode::IncompatibleStates, "states differ in sites, k, or space");
  for (int i = 1; i < a.k(); ++i)
    if (!a.R(i).subset_of(b.R(i)) || !b.S(i).subset_of(a.S(i))) return false;
  return true;
}

GradationState apply_F(const GradationState& s, const Exec& exec) {
  const Space& space = s.space();
  const int k = s.k();
  const auto slots = static_cast<std::size_t>(k - 1);
  // Slot i reads the fields of R_{i-1} and S_{i+1}.
  std::vector<DistanceField> r_fields(slots), s_fields(slots);
  parallel_for(0, 2 * slots, exec, [&](std::size_t job) {
    const Exec inner{1};
    if (job < slots)
      r_fields[job] = space.distance_field(s.R(static_cast<int>(job)), inner);
    else
      s_fields[job - slots] = space.distance_field(s.S(static_cast<int>(job - slots) + 2), inner);
  });
  std::vector<RegionMask> r(slots), ss(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    r[i] = dom_from_fields(space, r_fields[i], s_fields[i]);
    ss[i] = dom_from_fields(space, s_fields[i], r_fields[i]);
  }
  return GradationState(s.space_ptr(), s.P(), s.Q(), k, std::move(r), std::move(ss));
}

GradationState dual(const GradationState& s) {
  const int k = s.k();
  std::vector<RegionMask> r, ss;
  for (int i = 1; i < k; ++i) {
    r.push_back(s.S(k - i));
    ss.push_back(s.R(k - i));
  }
  return GradationState(s.space_ptr(), s.Q(), s.P(), k, std::move(r), std::move(ss));
}

int default_max_iters(const Space& space, int k) {
  if (space.is_grid()) {
    const GridGeometry& g = space.geometry();
    return 10 * (g.width + g.height);
  }
  return 2 * (k - 1) * static_cast<int>(space.size()) + 1;
}

FixpointResult iterate(const GradationState& start, Direction direction, int max_iters, const Exec& exec) {
  GradationState current = start;
  GradationState next = apply_F(current, exec);
  const bool ascending = direction == Direction::Ascending;
  if (ascending ? !leq(current, next) : !leq(next, current))
    throw Error(ErrorCode::NotPreFixpoint, ascending ? "start is not below F(start)" : "start is not above F(start)");

  FixpointResult result{current, 0, false, {}};
  const int k = start.k();
  for (;;) {
    std::vector<std::size_t> changed(static_cast<std::size_t>(k - 1));
    bool any = false;
    for (int i = 1; i < k; ++i) {
      const std::size_t c = (current.R(i) ^ next.R(i)).count() + (current.S(i) ^ next.S(i)).count();
      changed[static_cast<std::size_t>(i - 1)] = c;
      any = any || c != 0;
    }
    if (!any) {
      result.changed.push_back(std::move(changed));
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iters) break;
    result.changed.push_back(std::move(changed));
    ++result.iterations;
    current = std::move(next);
    next = apply_F(current, exec);
    if (ascending ? !leq(current, next) : !leq(next, current))
      throw Error(ErrorCode::InvalidState, "monotone chain broken at step " + std::to_string(result.iterations));
  }
  result.state = std::move(current);
  return result;
}

GradationCheck is_gradation(const GradationState& s, const Exec& exec) {
  const GradationState f = apply_F(s, exec);
  GradationCheck check;
  check.ok = true;
  for (int i = 1; i < s.k(); ++i) {
    const std::size_t rm = (s.R(i) ^ f.R(i)).count();
    const std::size_t sm = (s.S(i) ^ f.S(i)).count();
    check.r_mismatch.push_back(rm);
    check.s_mismatch.push_back(sm);
    check.ok = check.ok && rm == 0 && sm == 0;
  }
  return check;
}

}  // namespace ksector

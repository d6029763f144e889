#include "ksector/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksector/error.hpp"
#include "ksector/morphology.hpp"

namespace ksector {
namespace {

std::string idx(int i) { return std::to_string(i); }

void report_cells(CheckReport& r, const RegionMask& bad, const std::string& what) {
  bad.for_each([&](std::size_t i) { r.fail({i, what, 1.0}); });
}

}  // namespace

void CheckReport::fail(Witness w) {
  passed = false;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
}

double default_tolerance(const Space& space) { return space.is_grid() ? 1.5 * space.step() : 0.0; }

CheckReport check_sector(const Space& space, const std::vector<RegionMask>& sectors, const RegionMask& p,
                         const RegionMask& q, double tol, const Exec& exec) {
  CheckReport r;
  r.name = "sector";
  const int k = static_cast<int>(sectors.size()) + 1;
  for (int i = 1; i < k; ++i)
    if (sectors[static_cast<std::size_t>(i - 1)].empty())
      throw Error(ErrorCode::EmptyInput, "C_" + idx(i) + " is empty");

  // chain[j] = C_j for j = 0..k
  std::vector<const RegionMask*> chain;
  chain.push_back(&p);
  for (const RegionMask& c : sectors) chain.push_back(&c);
  chain.push_back(&q);
  std::vector<DistanceField> fields(chain.size());
  parallel_for(0, chain.size(), exec, [&](std::size_t j) { fields[j] = space.distance_field(*chain[j]); });

  double worst = 0.0;
  std::size_t mismatched = 0;
  for (int i = 1; i < k; ++i) {
    const DistanceField& before = fields[static_cast<std::size_t>(i - 1)];
    const DistanceField& after = fields[static_cast<std::size_t>(i + 1)];
    double slot_worst = 0.0;
    std::size_t worst_cell = 0;
    chain[static_cast<std::size_t>(i)]->for_each([&](std::size_t x) {
      const double res = std::abs(before.world(x) - after.world(x));
      if (res > slot_worst) {
        slot_worst = res;
        worst_cell = x;
      }
    });
    r.summary["residual_C" + idx(i)] = slot_worst;
    worst = std::max(worst, slot_worst);
    if (slot_worst > tol) r.fail({worst_cell, "residual of C_" + idx(i) + " exceeds tolerance", slot_worst});

    if (space.is_explicit()) {
      RegionMask bis(space.size());
      for (std::size_t x = 0; x < space.size(); ++x)
        if (before.values[x] == after.values[x]) bis.set(x);
      const RegionMask diff = bis ^ *chain[static_cast<std::size_t>(i)];
      mismatched += diff.count();
      report_cells(r, diff, "C_" + idx(i) + " != bisect(C_" + idx(i - 1) + ", C_" + idx(i + 1) + ")");
    }
  }
  r.summary["max_residual"] = worst;
  r.summary["tolerance"] = tol;
  if (space.is_explicit()) r.summary["bisector_mismatches"] = static_cast<double>(mismatched);
  return r;
}

CheckReport check_sector(const Space& space, const SectorSet& sectors, const RegionMask& p, const RegionMask& q,
                         double tol, const Exec& exec) {
  return check_sector(space, sectors.masks, p, q, tol, exec);
}

CheckReport check_separated(const std::vector<RegionMask>& sectors, const RegionMask& p, const RegionMask& q) {
  CheckReport r;
  r.name = "separated_sectors";
  std::vector<const RegionMask*> chain;
  chain.push_back(&p);
  for (const RegionMask& c : sectors) chain.push_back(&c);
  chain.push_back(&q);
  std::size_t violations = 0;
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    const RegionMask overlap = *chain[i - 1] & *chain[i + 1];
    violations += overlap.count();
    report_cells(r, overlap, "C_" + std::to_string(i - 1) + " & C_" + std::to_string(i + 1));
  }
  r.summary["violations"] = static_cast<double>(violations);
  return r;
}

CheckReport check_separated(const GradationState& s) {
  CheckReport r;
  r.name = "separated";
  std::size_t violations = 0;
  for (int i = 0; i < s.k(); ++i)
    for (int j = i + 1; j <= s.k(); ++j) {
      const RegionMask overlap = s.R(i) & s.S(j);
      violations += overlap.count();
      report_cells(r, overlap, "R_" + idx(i) + " & S_" + idx(j));
    }
  r.summary["violations"] = static_cast<double>(violations);
  return r;
}

CheckReport check_chain(const GradationState& s) {
  CheckReport r;
  r.name = "chain";
  std::size_t tests = 0;
  for (int i = 1; i < s.k(); ++i) {
    ++tests;
    RegionMask bad = s.R(i - 1);
    bad.subtract(s.R(i));
    report_cells(r, bad, "R_" + idx(i - 1) + " not in R_" + idx(i));
  }
  for (int j = 1; j < s.k(); ++j) {
    ++tests;
    RegionMask bad = s.S(j + 1);
    bad.subtract(s.S(j));
    report_cells(r, bad, "S_" + idx(j + 1) + " not in S_" + idx(j));
  }
  r.summary["inclusions_tested"] = static_cast<double>(tests);
  return r;
}

CheckReport check_zone_diagram(const GradationState& s, const Exec& exec) {
  if (s.k() != 3) throw Error(ErrorCode::NotApplicable, "zone diagram correspondence needs k = 3");
  const Space& space = s.space();
  CheckReport r;
  r.name = "zone_diagram";
  const RegionMask& a = s.R(1);
  const RegionMask& b = s.S(2);
  const auto compare = [&](const RegionMask& expected, const RegionMask& actual, const std::string& what) {
    const RegionMask diff = expected ^ actual;
    r.summary[what] = static_cast<double>(diff.count());
    report_cells(r, diff, what);
  };
  compare(dom(space, s.P(), b, exec), a, "R_1 = dom(P, S_2)");
  compare(dom(space, s.Q(), a, exec), b, "S_2 = dom(Q, R_1)");
  compare(dom(space, a, s.Q(), exec), s.R(2), "R_2 = dom(R_1, Q)");
  compare(dom(space, b, s.P(), exec), s.S(1), "S_1 = dom(S_2, P)");
  return r;
}

CheckReport check_boundary_lemma(const Space& space, const RegionMask& x, const RegionMask& y, const Exec& exec) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::PreconditionViolated, "sets must be nonempty");
  if (x.intersects(y)) throw Error(ErrorCode::PreconditionViolated, "sets must be disjoint");
  if (!space.is_grid()) throw Error(ErrorCode::NotApplicable, "boundary lemma check needs a grid");
  const GridGeometry& g = space.geometry();
  CheckReport r;
  r.name = "boundary_lemma";
  const RegionMask dxy = dom(space, x, y, exec);
  const RegionMask dyx = dom(space, y, x, exec);
  const RegionMask closure = dilate(g, space.complement(dxy), space.domain());
  RegionMask bad = dyx;
  bad.subtract(closure);
  r.summary["cells_outside_closure"] = static_cast<double>(bad.count());
  r.summary["tie_cells"] = static_cast<double>((dxy & dyx).count());
  report_cells(r, bad, "dom(Y,X) cell farther than one step from complement of dom(X,Y)");
  return r;
}

CheckReport check_dom_properties(const Space& space, const RegionMask& x, const RegionMask& y, const RegionMask& z,
                                 const Exec& exec) {
  const RegionMask d = dom(space, x, y, exec);
  const RegionMask c = bisect(space, x, y, exec);
  if (z.empty() || c.empty()) throw Error(ErrorCode::PreconditionViolated, "Z and bisect(X, Y) must be nonempty");
  if (d.intersects(z)) throw Error(ErrorCode::PreconditionViolated, "Z must be disjoint from dom(X, Y)");
  CheckReport r;
  r.name = "dom_properties";
  const auto compare = [&](const RegionMask& from_d, const RegionMask& from_c, const std::string& what) {
    RegionMask diff = from_d ^ from_c;
    r.summary[what + " differing"] = static_cast<double>(diff.count());
    if (space.is_grid()) {
      const GridGeometry& g = space.geometry();
      const RegionMask edge = inner_boundary(g, from_d, space.domain()) | inner_boundary(g, from_c, space.domain()) |
                              inner_boundary(g, space.complement(from_d), space.domain());
      diff.subtract(dilate(g, edge, space.domain()));
    }
    report_cells(r, diff, what);
  };
  compare(dom(space, d, z, exec), dom(space, c, z, exec), "dom(D,Z) vs dom(C,Z)");
  compare(dom(space, z, d, exec), dom(space, z, c, exec), "dom(Z,D) vs dom(Z,C)");
  return r;
}

}  // namespace ksector

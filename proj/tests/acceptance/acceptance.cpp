// Acceptance suite: one verdict line per criterion. Exit status is nonzero when a
// blocking criterion fails; criterion 8 is observational and criterion 7 blocks only
// on its boundary-lemma half (the gap half is a known discrete outcome, see README).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fixtures.hpp"
#include "ksector/io.hpp"
#include "ksector/sectors.hpp"
#include "ksector/verify.hpp"
#include "oracles.hpp"

namespace {

using namespace ksector;
namespace fs = std::filesystem;

enum class Verdict { Pass, Fail, Finding };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  bool blocking = true;  // a Fail with blocking = false is reported but does not fail the run
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* intent;
  std::function<Outcome()> run;
};

const Exec kExec = testing::all_cores();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Fixed {
  std::string label;
  FixpointResult result;
};

// States shared between criteria: criterion 1 produces them, 2 and 9 check them.
std::vector<Fixed> g_grid_states;

Outcome fail(std::string detail) { return {Verdict::Fail, true, std::move(detail)}; }

nlohmann::json case_sites(const std::string& name, bool q) {
  if (name == "points") return q ? testing::point_site(176, 160) : testing::point_site(80, 96);
  if (name == "point+segment") return q ? testing::segment_site(120, 40, 220, 90) : testing::point_site(70, 190);
  return q ? testing::polygon_site({{150, 40}, {220, 60}, {210, 120}, {160, 100}})
           : testing::polygon_site({{40, 180}, {110, 220}, {90, 150}});
}

Outcome fixed_point_validity() {
  std::ostringstream d;
  std::size_t runs = 0;
  for (const std::string name : {"points", "point+segment", "polygons"})
    for (int k : {2, 3, 4, 5, 7}) {
      const SceneSpec scene = parse_scene(
          testing::grid_scene(256, 256, "L2", k, case_sites(name, false), case_sites(name, true)).dump());
      for (const Direction dir : {Direction::Ascending, Direction::Descending}) {
        const GradationState start = dir == Direction::Ascending ? bottom(scene.space, scene.P, scene.Q, k)
                                                                 : top(scene.space, scene.P, scene.Q, k);
        FixpointResult r = iterate(start, dir, scene.max_iters(), kExec);
        const std::string label = name + " k=" + std::to_string(k) + (dir == Direction::Ascending ? " asc" : " desc");
        if (!r.converged) return fail(label + " did not converge in " + std::to_string(scene.max_iters()));
        if (!is_gradation(r.state, kExec).ok) return fail(label + " is not a gradation");
        if (dir == Direction::Ascending && k == 7 && name == "points")
          d << "points k=7 asc: " << r.iterations << " iterations; ";
        g_grid_states.push_back({label, std::move(r)});
        ++runs;
      }
    }
  d << runs << " runs converged and satisfy the fixed-point equations exactly";
  return {Verdict::Pass, true, d.str()};
}

Outcome chain_and_separation() {
  if (g_grid_states.empty()) return fail("no states from criterion 1");
  for (const Fixed& f : g_grid_states) {
    const CheckReport chain = check_chain(f.result.state);
    const CheckReport sep = check_separated(f.result.state);
    if (!chain.passed) return fail(f.label + ": chain witness cell " + std::to_string(chain.witnesses[0].index));
    if (!sep.passed)
      return fail(f.label + ": " + fmt(sep.summary.at("violations")) + " separation violations, first " +
                  sep.witnesses[0].what + " at cell " + std::to_string(sep.witnesses[0].index));
  }
  return {Verdict::Pass, true, std::to_string(g_grid_states.size()) + " states, zero chain or separation witnesses"};
}

double curve_hausdorff(const std::vector<Polyline>& traced, const Polyline& reference) {
  return std::max(oracle::max_deviation(traced, reference), oracle::max_coverage_gap(reference, traced));
}

Polyline horizontal(double x0, double x1, double y) {
  Polyline out;
  for (double x = x0; x <= x1; x += 0.25) out.push_back({x, y});
  return out;
}

Outcome analytic_four_sector() {
  const SpacePtr space = testing::grid_space(512, 512);
  const RegionMask p = testing::cells(*space, {{256, 160}}), q = testing::cells(*space, {{256, 352}});
  const FixpointResult r = testing::least(space, p, q, 4, kExec);
  if (!r.converged) return fail("did not converge");
  const SectorSet s = extract_sectors(r.state, true, kExec);
  const double h2 = curve_hausdorff(s.curves[1], horizontal(0, 511, 256));
  const double h1 = curve_hausdorff(s.curves[0], oracle::Parabola{{256, 160}, 256}.sample(0, 511, 0, 511));
  const double h3 = curve_hausdorff(s.curves[2], oracle::Parabola{{256, 352}, 256}.sample(0, 511, 0, 511));
  const std::string d = "Hausdorff C_1 " + fmt(h1) + ", C_2 " + fmt(h2) + ", C_3 " + fmt(h3) + " cells";
  const bool ok = h2 <= 1.0 && h1 <= 1.5 && h3 <= 1.5;
  return {ok ? Verdict::Pass : Verdict::Fail, true, d + " (limits 1.5 / 1.0 / 1.5)"};
}

Outcome equal_spacing() {
  const SceneSpec scene = load_scene(testing::scenes_dir() / "two_lines_k5.json");
  std::ostringstream d;
  double worst = 0.0;
  for (const FixpointResult& r : {testing::least(scene.space, scene.P, scene.Q, 5, kExec),
                                  testing::greatest(scene.space, scene.P, scene.Q, 5, kExec)}) {
    if (!r.converged) return fail("did not converge");
    const SectorSet s = extract_sectors(r.state, true, kExec);
    for (int i = 1; i < 5; ++i) {
      const double y = 14.0 + 100.0 * i / 5.0;
      worst = std::max(worst, curve_hausdorff(s.curves[static_cast<std::size_t>(i - 1)], horizontal(0, 127, y)));
    }
  }
  d << "k=5 worst Hausdorff to the lines at i/5: " << fmt(worst) << " cells";
  if (worst > 1.0) return fail(d.str());

  // Symmetric placement with a middle slot: k=4 puts C_2 on the midline exactly.
  const FixpointResult even = testing::least(scene.space, scene.P, scene.Q, 4, kExec);
  const SectorSet s = extract_sectors(even.state, true, kExec);
  RegionMask midline(scene.space->size());
  for (int x = 0; x < 128; ++x) midline.set(scene.space->geometry().index(x, 64));
  double off = 0.0;
  for (const Polyline& line : s.curves[1])
    for (Point2 p : line) off = std::max(off, std::abs(p.y - 64.0));
  d << "; k=4 C_2 mask " << (s.C(2) == midline ? "equals" : "differs from") << " row 64, curve offset " << fmt(off);
  if (s.C(2) != midline || off > 1e-9) return fail(d.str());
  return {Verdict::Pass, true, d.str()};
}

Outcome nonexistence_oracle() {
  const SpacePtr space = testing::line_space({-1, 0, 1});
  const auto t0 = std::chrono::steady_clock::now();
  const auto found = brute_force_ksectors(*space, testing::points(*space, {2}), testing::points(*space, {0}), 3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::uint64_t candidates = 0;
  const auto reference = oracle::ksectors(oracle::line_matrix({-1, 0, 1}), 0b100, 0b001, 3, &candidates);
  std::ostringstream d;
  d << found.size() << " trisectors among " << oracle_candidate_count(3, 3) << " candidates (independent oracle: "
    << reference.size() << " of " << candidates << "), " << fmt(secs * 1000) << " ms";
  const bool ok = found.empty() && reference.empty() && candidates == 49 && oracle_candidate_count(3, 3) == 49 &&
                  secs < 1.0;
  return {ok ? Verdict::Pass : Verdict::Fail, true, d.str()};
}

Outcome existence_oracle() {
  const SpacePtr space = testing::line_space({0, 1, 2, 3, 4});
  const RegionMask p = testing::points(*space, {0}), q = testing::points(*space, {4});
  const auto found = brute_force_ksectors(*space, p, q, 4);
  const std::vector<RegionMask> unit = {testing::points(*space, {1}), testing::points(*space, {2}),
                                        testing::points(*space, {3})};
  bool listed = false;
  for (const SectorSet& s : found) listed = listed || s.masks == unit;
  const auto reference = oracle::ksectors(oracle::line_matrix({0, 1, 2, 3, 4}), 0b00001, 0b10000, 4);
  const CheckReport consistency = check_consistency(space, p, q, 4);
  const SectorSet lfp = extract_sectors(testing::least(space, p, q, 4).state);
  const CheckReport residual = check_sector(*space, lfp, p, q, 0.0);
  std::ostringstream d;
  d << found.size() << " 4-sector(s), unit tuple " << (listed ? "listed" : "missing") << ", independent oracle "
    << reference.size() << ", consistency " << (consistency.passed ? "passes" : "fails") << ", fixed-point residual "
    << residual.summary.at("max_residual");
  const bool ok = listed && reference.size() == found.size() && consistency.passed && residual.passed &&
                  residual.summary.at("max_residual") == 0.0 && lfp.masks == unit;
  return {ok ? Verdict::Pass : Verdict::Fail, true, d.str()};
}

struct GapSummary {
  std::size_t symdiff = 0;
  bool c2_differs = false;
};

GapSummary l1_gap(const SpacePtr& space, const RegionMask& p, const RegionMask& q) {
  const auto [lo, hi] = testing::extremes(space, p, q, 3, kExec);
  const SectorSet ls = extract_sectors(lo.state, true, kExec), us = extract_sectors(hi.state, true, kExec);
  const GapReport gap = gap_metrics(lo.state, ls, hi.state, us);
  return {std::max(gap.slots[1].symdiff_R, gap.slots[1].symdiff_S), ls.C(2) != us.C(2)};
}

Outcome l1_non_uniqueness() {
  const SceneSpec scene = load_scene(testing::scenes_dir() / "fig3_l1.json");
  const double area = static_cast<double>(scene.space->size());
  const GapSummary canonical = l1_gap(scene.space, scene.P, scene.Q);
  std::ostringstream d;
  d << "gap: slot 2 symmetric difference " << canonical.symdiff << " cells (needs > " << fmt(0.005 * area)
    << "), C_2 " << (canonical.c2_differs ? "differs" : "identical");
  // Placement sweep: the largest gap any diagonal pair reaches on this grid.
  std::size_t best = 0;
  bool any_c2 = false;
  for (const auto& [a, b] : std::vector<std::pair<int, int>>{{20, 42}, {40, 104}, {96, 160}, {32, 224}}) {
    const GapSummary s = l1_gap(scene.space, testing::cells(*scene.space, {{a, a}}),
                                testing::cells(*scene.space, {{b, b}}));
    best = std::max(best, s.symdiff);
    any_c2 = any_c2 || s.c2_differs;
  }
  d << "; sweep max " << best << " cells, C_2 " << (any_c2 ? "differs somewhere" : "never differs");
  const bool gap_ok = canonical.symdiff > 0.005 * area && canonical.c2_differs;

  const RegionMask x = testing::cells(*scene.space, {{64, 64}}), y = testing::cells(*scene.space, {{192, 192}});
  const CheckReport l1 = check_boundary_lemma(*scene.space, x, y, kExec);
  const SpacePtr l2 = testing::grid_space(256, 256);
  const CheckReport e = check_boundary_lemma(*l2, x, y, kExec);
  const bool lemma_ok = !l1.passed && !l1.witnesses.empty() && e.passed;
  d << "; boundary lemma: l1 " << (l1.passed ? "passes" : "fails") << " ("
    << fmt(l1.summary.at("cells_outside_closure")) << " witness cells), L2 " << (e.passed ? "passes" : "fails");
  if (!lemma_ok) return fail(d.str());
  if (!gap_ok) return {Verdict::Fail, false, d.str()};
  return {Verdict::Pass, true, d.str()};
}

Outcome euclidean_uniqueness() {
  const SpacePtr space = testing::grid_space(512, 512);
  const RegionMask p = testing::cells(*space, {{200, 180}}), q = testing::cells(*space, {{312, 332}});
  std::ostringstream d;
  bool ok = true;
  for (int k : {3, 5}) {
    const auto [lo, hi] = testing::extremes(space, p, q, k, kExec);
    if (!lo.converged || !hi.converged) return {Verdict::Finding, false, "k=" + std::to_string(k) + " unconverged"};
    const GapReport gap = gap_metrics(lo.state, extract_sectors(lo.state, true, kExec), hi.state,
                                      extract_sectors(hi.state, true, kExec));
    d << "k=" << k << " max Hausdorff " << fmt(gap.max_hausdorff) << " (R symdiff " << gap.max_symdiff_R << "); ";
    for (std::size_t i = 0; i < gap.slots.size(); ++i)
      if (gap.slots[i].hausdorff > 2.0) {
        ok = false;
        d << "witness slot " << i + 1 << " Hausdorff " << fmt(gap.slots[i].hausdorff) << "; ";
      }
  }
  return {ok ? Verdict::Pass : Verdict::Finding, false, d.str() + "limit 2 cells"};
}

Outcome zone_diagrams() {
  std::vector<Fixed> states;
  for (const Fixed& f : g_grid_states)
    if (f.result.state.k() == 3) states.push_back(f);
  for (const char* file : {"fig3_l1.json", "geodesic_room.json", "nonexistence_3pt.json"}) {
    const SceneSpec scene = load_scene(testing::scenes_dir() / file);
    const auto [lo, hi] = testing::extremes(scene.space, scene.P, scene.Q, 3, kExec);
    states.push_back({std::string(file) + " lower", lo});
    states.push_back({std::string(file) + " upper", hi});
  }
  for (const Fixed& f : states) {
    if (!f.result.converged) return fail(f.label + " did not converge");
    const CheckReport r = check_zone_diagram(f.result.state, kExec);
    if (!r.passed) return fail(f.label + ": " + r.witnesses[0].what + " at cell " + std::to_string(r.witnesses[0].index));
  }
  return {Verdict::Pass, true, std::to_string(states.size()) + " converged k=3 states are zone diagrams"};
}

Outcome duality() {
  struct Case {
    std::string label;
    SpacePtr space;
    RegionMask p, q;
    int k;
  };
  std::vector<Case> cases;
  const SpacePtr l2 = testing::grid_space(256, 256);
  cases.push_back({"L2 256 k=4", l2, testing::cells(*l2, {{80, 96}}), testing::cells(*l2, {{176, 160}}), 4});
  const SceneSpec fig3 = load_scene(testing::scenes_dir() / "fig3_l1.json");
  cases.push_back({"l1 fig3 k=3", fig3.space, fig3.P, fig3.Q, 3});
  const SceneSpec fig1 = load_scene(testing::scenes_dir() / "fig1_4sector.json");
  cases.push_back({"fig1 k=4", fig1.space, fig1.P, fig1.Q, 4});
  const SpacePtr three = testing::line_space({-1, 0, 1});
  cases.push_back({"3pt k=3", three, testing::points(*three, {2}), testing::points(*three, {0}), 3});
  const SpacePtr path = testing::line_space({0, 1, 2, 3, 4});
  cases.push_back({"path5 k=4", path, testing::points(*path, {0}), testing::points(*path, {4}), 4});
  const auto profile = [](double r) { return r <= 1 ? r : r <= 2 ? 1.0 : r / 2; };
  const SpacePtr bent = std::make_shared<const Space>(
      Space::finite(FiniteMetricSpace::on_line({-2, -1, 0, 0.5, 1, 1.5, 2, 3}, profile)));
  cases.push_back({"profile metric k=3", bent, testing::points(*bent, {0}), testing::points(*bent, {7}), 3});
  for (const Case& c : cases) {
    const FixpointResult lo = testing::least(c.space, c.p, c.q, c.k, kExec);
    const FixpointResult hi = testing::greatest(c.space, c.q, c.p, c.k, kExec);
    if (!lo.converged || !hi.converged) return fail(c.label + " did not converge");
    if (!(lo.state == dual(hi.state))) return fail(c.label + ": least(P,Q) differs from dual of greatest(Q,P)");
  }
  return {Verdict::Pass, true, std::to_string(cases.size()) + " scenes (3 grid, 3 explicit) match exactly"};
}

Outcome determinism() {
  const fs::path scene = testing::scenes_dir() / "fig1_4sector.json";
  std::map<std::string, std::string> trees[2];
  const unsigned threads[2] = {1, std::max(2u, kExec.threads)};
  std::ostringstream log;
  for (int t = 0; t < 2; ++t) {
    const fs::path out = testing::scratch_dir("acceptance_det" + std::to_string(t));
    tools::Options o;
    o.scene = scene;
    o.out_dir = out;
    o.threads = threads[t];
    if (tools::compute(o, log).exit_code != 0) return fail("compute failed: " + log.str());
    for (const auto& e : fs::directory_iterator(out))
      if (e.path().filename() != "timings.json") trees[t][e.path().filename().string()] = read_file(e.path());
  }
  if (trees[0] != trees[1]) return fail("outputs differ between --threads 1 and " + std::to_string(threads[1]));

  const SceneSpec spec = load_scene(scene);
  std::size_t round_trips = 0;
  for (const auto& [name, bytes] : trees[0]) {
    if (name.ends_with(".pgm")) {
      int w = 0, h = 0;
      const RegionMask m = mask_from_pgm(bytes, &w, &h);
      if (mask_to_pgm(m, w, h) != bytes) return fail(name + " does not round-trip");
      ++round_trips;
    } else if (name.ends_with("_state.json")) {
      if (state_to_json(state_from_json(bytes, spec.space)) != bytes) return fail(name + " does not round-trip");
      ++round_trips;
    } else if (name == "report.json") {
      const RunReport r = report_from_json(bytes);
      if (report_to_json(r) != bytes || !(report_from_json(report_to_json(r)) == r))
        return fail("report.json does not round-trip");
      ++round_trips;
    }
  }
  return {Verdict::Pass, true,
          std::to_string(trees[0].size()) + " artifacts byte-identical at --threads 1 and " +
              std::to_string(threads[1]) + "; " + std::to_string(round_trips) + " round-trip identically"};
}

Outcome transform_exactness() {
  std::mt19937 rng(20240229);
  std::uniform_real_distribution<double> density(0.0005, 0.2);
  const SpacePtr spaces[3] = {testing::grid_space(64, 64, L2Metric{}), testing::grid_space(64, 64, L1Metric{}),
                              testing::grid_space(64, 64, LinfMetric{})};
  const GridGeometry& g = spaces[0]->geometry();
  std::size_t compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const RegionMask src = testing::random_mask(g.cell_count(), density(rng), rng);
    const oracle::BruteFields ref = oracle::brute_fields(g, src);
    const std::vector<std::int64_t>* expected[3] = {&ref.l2sq, &ref.l1, &ref.linf};
    for (int m = 0; m < 3; ++m) {
      const DistanceField f = spaces[m]->distance_field(src, kExec);
      if (f.values != *expected[m])
        return fail("trial " + std::to_string(trial) + ": " + metric_name(spaces[m]->metric()) + " mismatch");
      compared += f.values.size();
    }
  }
  return {Verdict::Pass, true, "100 trials x 3 metrics, " + std::to_string(compared) + " cells exact"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1", "fixed points of three site families x k in {2,3,4,5,7} on 256^2 L2", fixed_point_validity},
      {"2", "chain inclusions and separation at every converged state", chain_and_separation},
      {"3", "analytic 4-sector: midline and two parabolas, 512^2", analytic_four_sector},
      {"4", "parallel line sites: equally spaced sectors, exact midline", equal_spacing},
      {"5", "no trisector on {-1,0,1}", nonexistence_oracle},
      {"6", "path {0..4}: oracle, consistency and zero residual", existence_oracle},
      {"7", "l1 non-uniqueness gap and boundary-lemma contrast", l1_non_uniqueness},
      {"8", "L2 least and greatest sectors within 2 cells (observational)", euclidean_uniqueness},
      {"9", "k=3 fixed points are zone diagrams", zone_diagrams},
      {"10", "least(P,Q) = dual(greatest(Q,P))", duality},
      {"11", "byte-identical artifacts across --threads and identity round-trips", determinism},
      {"12", "L2/L1/Linf transforms equal brute force on 64^2 random sources", transform_exactness},
  };

  int blocking_failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = out.verdict == Verdict::Pass ? "PASS" : out.verdict == Verdict::Fail ? "FAIL" : "FINDING";
    std::cout << tag << " [" << c.id << "] " << c.intent << ": " << out.detail;
    if (out.verdict == Verdict::Fail && !out.blocking) std::cout << " (known, non-blocking)";
    std::cout << " (" << fmt(secs) << " s)" << std::endl;
    if (out.verdict == Verdict::Fail && out.blocking) ++blocking_failures;
  }
  std::cout << (blocking_failures == 0 ? "acceptance: all blocking criteria pass"
                                       : "acceptance: " + std::to_string(blocking_failures) + " blocking failure(s)")
            << std::endl;
  return blocking_failures == 0 ? 0 : 1;
}

#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "ksector/error.hpp"

namespace ksector::tools {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Files written by one command, removed again if the command fails part way.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& bytes) {
    if (!opened_) {
      created_dir_ = !fs::exists(dir_);
      fs::create_directories(dir_);
      opened_ = true;
    }
    const fs::path path = dir_ / name;
    written_.push_back(path);
    write_file(path, bytes);
  }

  void discard() noexcept {
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
    written_.clear();
    if (created_dir_) fs::remove(dir_, ec);  // only succeeds when empty
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool opened_ = false;
  bool created_dir_ = false;
};

struct Run {
  std::string label;  // "lower", "upper" or "state"
  GradationState state;
  std::optional<SectorSet> sectors;
};

struct Check {
  CheckReport report;
  bool gate = true;
};

std::string slot(int i) { return std::to_string(i); }

void apply_overrides(SceneSpec& scene, const Options& opts) {
  if (opts.direction) {
    const std::string& d = *opts.direction;
    if (d != "asc" && d != "desc" && d != "both")
      throw Error(ErrorCode::ValidationError, "direction must be asc, desc or both, not '" + d + "'");
    scene.iteration.ascending = d != "desc";
    scene.iteration.descending = d != "asc";
  }
  if (opts.max_iters) {
    if (*opts.max_iters < 0) throw Error(ErrorCode::ValidationError, "max-iters must be nonnegative");
    scene.iteration.max_iters = opts.max_iters;
  }
  if (opts.tol) {
    if (!(*opts.tol >= 0.0)) throw Error(ErrorCode::ValidationError, "tol must be nonnegative");
    scene.tol = opts.tol;
  }
}

SceneSpec load(const Options& opts) {
  SceneSpec scene = load_scene(opts.scene);
  apply_overrides(scene, opts);
  return scene;
}

std::pair<int, int> mask_shape(const Space& space) {
  if (space.is_grid()) return {space.geometry().width, space.geometry().height};
  return {static_cast<int>(space.size()), 1};
}

CheckReport gradation_report(const GradationState& s, const Exec& exec) {
  CheckReport r;
  r.name = "gradation";
  const GradationState f = apply_F(s, exec);
  std::size_t total = 0;
  for (int i = 1; i < s.k(); ++i) {
    const RegionMask dr = s.R(i) ^ f.R(i);
    const RegionMask ds = s.S(i) ^ f.S(i);
    total += dr.count() + ds.count();
    dr.for_each([&](std::size_t c) {
      r.fail({c, "R_" + slot(i) + " != dom(R_" + slot(i - 1) + ", S_" + slot(i + 1) + ")", 1.0});
    });
    ds.for_each([&](std::size_t c) {
      r.fail({c, "S_" + slot(i) + " != dom(S_" + slot(i + 1) + ", R_" + slot(i - 1) + ")", 1.0});
    });
  }
  r.summary["mismatched_cells"] = static_cast<double>(total);
  return r;
}

std::vector<Check> state_checks(const SceneSpec& scene, Run& run, const Exec& exec,
                                std::vector<std::string>& findings) {
  const Space& space = *scene.space;
  const bool explicit_space = space.is_explicit();
  std::vector<Check> out;
  const auto add = [&](CheckReport r, bool gate = true) {
    r.name = run.label + "." + r.name;
    out.push_back({std::move(r), gate});
    return out.back().report.passed;
  };

  const bool fixed = add(gradation_report(run.state, exec));
  add(check_chain(run.state));
  add(check_separated(run.state));
  if (!fixed) return out;
  if (run.state.k() == 3) add(check_zone_diagram(run.state, exec));

  try {
    run.sectors = extract_sectors(run.state, space.is_grid(), exec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptySectorSlot) throw;
    if (explicit_space) {
      findings.push_back(run.label + ": no " + slot(run.state.k()) + "-sector from this gradation (" + e.what() + ")");
    } else {
      CheckReport r;
      r.name = "sector";
      r.passed = false;
      r.notes.push_back(e.what());
      add(std::move(r));
    }
    return out;
  }
  const SectorSet& sectors = *run.sectors;
  const bool sector = add(check_sector(space, sectors, scene.P, scene.Q, scene.tolerance(), exec), !explicit_space);
  add(check_separated(sectors.masks, scene.P, scene.Q), !explicit_space);
  if (explicit_space && !sector)
    findings.push_back(run.label + ": the sector tuple of this gradation is not a " + slot(run.state.k()) +
                       "-sector");
  return out;
}

std::vector<Run> iterate_scene(const SceneSpec& scene, const Exec& exec, const Options& opts, std::ostream& log,
                               RunReport& report, json& timings, bool& converged) {
  std::vector<Run> runs;
  converged = true;
  Stopwatch clock;
  for (Direction dir : {Direction::Ascending, Direction::Descending}) {
    const bool asc = dir == Direction::Ascending;
    if (asc ? !scene.iteration.ascending : !scene.iteration.descending) continue;
    const GradationState start =
        asc ? bottom(scene.space, scene.P, scene.Q, scene.k) : top(scene.space, scene.P, scene.Q, scene.k);
    FixpointResult result = iterate(start, dir, scene.max_iters(), exec);
    timings[asc ? "ascending_s" : "descending_s"] = clock.lap();
    report.runs.push_back(summarize(result, dir));
    const std::string label = asc ? "lower" : "upper";
    if (opts.verbose)
      for (std::size_t n = 0; n < result.changed.size(); ++n) {
        std::size_t total = 0;
        for (std::size_t c : result.changed[n]) total += c;
        log << label << " step " << n + 1 << ": " << total << " cells changed\n";
      }
    log << label << ": " << (result.converged ? "converged" : "not converged") << " after " << result.iterations
        << " iterations\n";
    converged = converged && result.converged;
    runs.push_back({label, std::move(result.state), std::nullopt});
  }
  return runs;
}

// Sector masks for the gap report, also when extraction refused (empty slot).
SectorSet sectors_for_gap(const Run& run) {
  if (run.sectors) return *run.sectors;
  SectorSet s;
  s.k = run.state.k();
  s.masks = sector_masks(run.state);
  s.ties = tie_masks(run.state);
  s.curves.resize(s.masks.size());
  return s;
}

void add_gap(std::vector<Run>& runs, RunReport& report) {
  if (runs.size() != 2) return;
  const GapReport gap = gap_metrics(runs[0].state, sectors_for_gap(runs[0]), runs[1].state, sectors_for_gap(runs[1]));
  for (std::size_t i = 0; i < gap.slots.size(); ++i)
    if (gap.slots[i].symdiff_R > 0 || gap.slots[i].symdiff_S > 0)
      report.findings.push_back("slot " + std::to_string(i + 1) + ": least and greatest gradations differ (" +
                                std::to_string(gap.slots[i].symdiff_R) + " cells in R, " +
                                std::to_string(gap.slots[i].symdiff_S) + " in S)");
  report.gap = gap;
}

bool log_checks(const std::vector<Check>& checks, RunReport& report, std::ostream& log) {
  bool ok = true;
  for (const Check& c : checks) {
    const CheckReport& r = c.report;
    log << (r.passed ? "PASS " : c.gate ? "FAIL " : "NOTE ") << r.name;
    if (!r.passed && !r.witnesses.empty()) {
      const Witness& w = r.witnesses.front();
      log << ": " << r.witnesses.size() << (r.witnesses.size() == kMaxWitnesses ? "+" : "") << " witnesses, first "
          << w.index << " (" << w.what << ", " << w.value << ")";
    }
    for (const std::string& n : r.notes) log << " [" << n << "]";
    log << "\n";
    ok = ok && (r.passed || !c.gate);
    report.checks.push_back(r);
  }
  return ok;
}

RunReport new_report(const SceneSpec& scene) {
  RunReport r;
  r.scene_digest = scene.digest;
  r.metric = metric_name(scene.space->metric());
  r.k = scene.k;
  return r;
}

void write_run(Artifacts& files, const SceneSpec& scene, const Run& run, const std::string& svg_name) {
  const auto [w, h] = mask_shape(*scene.space);
  if (scene.output.masks) {
    const std::vector<RegionMask> masks = run.sectors ? run.sectors->masks : sector_masks(run.state);
    for (std::size_t i = 0; i < masks.size(); ++i)
      files.write(run.label + "_C" + std::to_string(i + 1) + ".pgm", mask_to_pgm(masks[i], w, h));
  }
  if (scene.output.states) files.write(run.label + "_state.json", state_to_json(run.state));
  if (scene.output.svg && scene.space->is_grid() && run.sectors)
    files.write(svg_name, sectors_to_svg(scene.space->geometry(), *run.sectors, scene));
}

GradationState load_state(const Options& opts, const SceneSpec& scene) {
  GradationState s = state_from_json(read_file(*opts.state), scene.space);
  if (s.P() != scene.P || s.Q() != scene.Q || s.k() != scene.k)
    throw Error(ErrorCode::IncompatibleScenes, "state does not belong to this scene (sites or k differ)");
  return s;
}

template <typename Body>
Outcome guarded(std::ostream& log, Artifacts* files, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (files) files->discard();
    log << "error: " << e.what() << "\n";
    const bool check = e.code() == ErrorCode::InvalidState || e.code() == ErrorCode::IncompatibleScenes;
    return {check ? kExitCheckFailed : kExitUsage, {}};
  } catch (const std::exception& e) {
    if (files) files->discard();
    log << "error: " << e.what() << "\n";
    return {kExitUsage, {}};
  }
}

}  // namespace

Outcome compute(const Options& opts, std::ostream& log) {
  Artifacts files(opts.out_dir);
  return guarded(log, &files, [&]() -> Outcome {
    Stopwatch total, clock;
    json timings;
    const SceneSpec scene = load(opts);
    if (opts.out_dir.empty()) throw Error(ErrorCode::ValidationError, "compute needs --out-dir");
    timings["load_s"] = clock.lap();
    const Exec exec{opts.threads};
    Outcome out{kExitOk, new_report(scene)};
    bool converged = false;
    std::vector<Run> runs = iterate_scene(scene, exec, opts, log, out.report, timings, converged);
    clock.lap();
    if (!converged) {
      log << "error: iteration limit " << scene.max_iters() << " reached; no artifacts written\n";
      return {kExitNotConverged, std::move(out.report)};
    }

    std::vector<Check> checks;
    for (Run& run : runs) {
      std::vector<Check> c = state_checks(scene, run, exec, out.report.findings);
      checks.insert(checks.end(), c.begin(), c.end());
    }
    const bool ok = log_checks(checks, out.report, log);
    add_gap(runs, out.report);
    for (const std::string& f : out.report.findings) log << "finding: " << f << "\n";
    timings["checks_s"] = clock.lap();

    for (const Run& run : runs) write_run(files, scene, run, "sectors_" + run.label + ".svg");
    files.write("report.json", report_to_json(out.report));
    timings["write_s"] = clock.lap();
    timings["total_s"] = total.lap();
    timings["threads"] = opts.threads;
    files.write("timings.json", timings.dump(2) + "\n");
    out.exit_code = ok ? kExitOk : kExitCheckFailed;
    return out;
  });
}

Outcome verify(const Options& opts, std::ostream& log) {
  Artifacts files(opts.out_dir);
  return guarded(log, &files, [&]() -> Outcome {
    const SceneSpec scene = load(opts);
    const Exec exec{opts.threads};
    Outcome out{kExitOk, new_report(scene)};
    std::vector<Run> runs;
    if (opts.state) {
      runs.push_back({"state", load_state(opts, scene), std::nullopt});
    } else {
      json timings;
      bool converged = false;
      runs = iterate_scene(scene, exec, opts, log, out.report, timings, converged);
      if (!converged) return {kExitNotConverged, std::move(out.report)};
    }

    std::vector<Check> checks;
    for (Run& run : runs) {
      std::vector<Check> c = state_checks(scene, run, exec, out.report.findings);
      checks.insert(checks.end(), c.begin(), c.end());
    }
    if (scene.space->is_explicit()) {
      try {
        Check c{check_consistency(scene.space, scene.P, scene.Q, scene.k, {OracleLimits{}.budget, exec}), true};
        for (const std::string& n : c.report.notes) out.report.findings.push_back(n);
        checks.push_back(std::move(c));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
        out.report.findings.push_back(std::string("oracle cross-check skipped: ") + e.what());
      }
    }
    const bool ok = log_checks(checks, out.report, log);
    add_gap(runs, out.report);
    for (const std::string& f : out.report.findings) log << "finding: " << f << "\n";
    if (!opts.out_dir.empty()) files.write("report.json", report_to_json(out.report));
    out.exit_code = ok ? kExitOk : kExitCheckFailed;
    return out;
  });
}

Outcome oracle(const Options& opts, std::ostream& log) {
  Artifacts files(opts.out_dir);
  return guarded(log, &files, [&]() -> Outcome {
    const SceneSpec scene = load(opts);
    if (!scene.space->is_explicit()) throw Error(ErrorCode::NotApplicable, "the oracle needs a finite scene");
    const std::uint64_t candidates = oracle_candidate_count(scene.space->size(), scene.k);
    const std::vector<SectorSet> found =
        brute_force_ksectors(*scene.space, scene.P, scene.Q, scene.k, {OracleLimits{}.budget, Exec{opts.threads}});
    log << found.size() << " " << scene.k << "-sector(s) among " << candidates << " candidate tuples\n";
    json list = json::array();
    for (const SectorSet& s : found) {
      json tuple = json::array();
      std::ostringstream line;
      for (int i = 1; i < s.k; ++i) {
        const std::vector<std::size_t> idx = s.C(i).indices();
        tuple.push_back(idx);
        line << (i > 1 ? " " : "") << "C_" << i << "={";
        for (std::size_t j = 0; j < idx.size(); ++j) line << (j ? "," : "") << idx[j];
        line << "}";
      }
      list.push_back(tuple);
      log << line.str() << "\n";
    }
    Outcome out{kExitOk, new_report(scene)};
    if (found.empty()) out.report.findings.push_back("nonexistence confirmed");
    if (!opts.out_dir.empty()) {
      const json doc = {{"scene_digest", scene.digest}, {"k", scene.k},           {"points", scene.space->size()},
                        {"candidates", candidates},     {"sectors", list}};
      files.write("oracle.json", doc.dump(2) + "\n");
    }
    return out;
  });
}

Outcome render(const Options& opts, std::ostream& log) {
  Artifacts files(opts.out_dir);
  return guarded(log, &files, [&]() -> Outcome {
    const SceneSpec scene = load(opts);
    if (!opts.state) throw Error(ErrorCode::ValidationError, "render needs --state");
    if (opts.out_dir.empty()) throw Error(ErrorCode::ValidationError, "render needs --out-dir");
    const GradationState state = load_state(opts, scene);
    SectorSet sectors;
    sectors.k = state.k();
    sectors.masks = sector_masks(state, Exec{opts.threads});
    sectors.ties = tie_masks(state);
    sectors.curves.resize(sectors.masks.size());
    if (scene.space->is_grid())
      for (int i = 1; i < state.k(); ++i) sectors.curves[static_cast<std::size_t>(i - 1)] = trace_boundary(state, i);
    const auto [w, h] = mask_shape(*scene.space);
    for (int i = 1; i < state.k(); ++i) files.write("C" + slot(i) + ".pgm", mask_to_pgm(sectors.C(i), w, h));
    if (scene.space->is_grid()) files.write("sectors.svg", sectors_to_svg(scene.space->geometry(), sectors, scene));
    log << "rendered " << state.k() - 1 << " slot(s) to " << opts.out_dir.string() << "\n";
    return Outcome{kExitOk, new_report(scene)};
  });
}

}  // namespace ksector::tools

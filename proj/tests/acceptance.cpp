// End-to-end acceptance run: every criterion is one recipe run with its
// default config, checked against thresholds fixed below. Prints one
// PASS/FAIL line per criterion; exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fpplab/harness.hpp"

using fpplab::ExperimentConfig;
using fpplab::RunRecord;

namespace {

std::string g_out = "acceptance_out";

RunRecord run(const std::string& recipe) {
  ExperimentConfig cfg = fpplab::default_config(recipe);
  cfg.out = g_out;
  return fpplab::run_recipe(cfg);
}

const fpplab::CsvTable& table(const RunRecord& r, const std::string& name) {
  for (const auto& t : r.tables)
    if (t.name == name) return t;
  throw std::runtime_error("missing table " + name);
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

// ---- criteria ----

Outcome oracle_equivalence() {
  auto r = run("oracle");
  long fixtures = r.summary["fixtures"], mismatches = r.summary["mismatches"];
  double secs = r.summary["oracle_seconds"];
  return {fixtures == 100 && mismatches == 0 && secs < 10.0,
          std::to_string(fixtures) + " fixtures, " + std::to_string(mismatches) + " mismatching vertices, " +
              fmt("%.2f s", secs)};
}

Outcome closed_form_ball() {
  auto r = run("diamond");
  bool ok = r.summary["matches_closed_form"];
  const auto& t = table(r, "timeline");
  return {ok && t.rows.size() == 21, "t = 0..20, boundary = 8t+4, no holes, T = |x|_1"};
}

Outcome array_identity() {
  auto r = run("array-identity");
  double err = r.summary["max_relative_error"];
  long caps = r.summary["cap_violations"], fixtures = r.summary["fixtures"];
  return {fixtures == 50 && err <= 1e-9 && caps == 0,
          std::to_string(fixtures) + " fixtures, max rel err " + fmt("%.3g", err) + ", cap violations " +
              std::to_string(caps)};
}

Outcome smooth_scaling() {
  auto r = run("smooth-scaling");
  double slope = r.summary["boundary_fit"]["slope"];
  long used = r.summary["replications_used"];
  return {used >= 50 && in(slope, 0.8, 1.2),
          "exponent " + fmt("%.4f", slope) + " (band [0.8, 1.2]), " + std::to_string(used) + " replications"};
}

Outcome rough_scaling() {
  auto r = run("rough-scaling");
  double full = r.summary["boundary_fit"]["slope"], ext = r.summary["exterior_fit"]["slope"];
  return {in(full, 1.25, 1.75) && in(ext, 0.8, 1.2),
          "boundary exponent " + fmt("%.4f", full) + " (band [1.25, 1.75]), exterior exponent " + fmt("%.4f", ext) +
              " (band [0.8, 1.2])"};
}

Outcome rough_density() {
  auto r = run("rough-density");
  std::vector<double> as = r.summary["a"], med = r.summary["median_density"];
  bool mono = r.summary["nonincreasing"];
  bool small = true;
  std::string d;
  for (std::size_t i = 0; i < as.size(); ++i) {
    d += "a=" + fmt("%g", as[i]) + ":" + fmt("%.4f", med[i]) + " ";
    if (as[i] == 10.0 || as[i] == 20.0) small = small && med[i] <= 3.0 / as[i];
  }
  return {mono && small, d + "(need nonincreasing, <= 3/a at a = 10, 20)"};
}

Outcome hole_order() {
  auto r = run("hole-order");
  std::vector<double> ratio = r.summary["hole_ratio"];
  bool positive = true;
  for (double x : ratio) positive = positive && x > 0.0 && std::isfinite(x);
  const auto& jb = r.summary["hole_ratio_band"];
  double band = jb.is_number() ? jb.get<double>() : std::numeric_limits<double>::infinity();
  return {positive && band <= 10.0, "ratios " + fmt("%.3g", ratio[0]) + ", " + fmt("%.3g", ratio[1]) + ", " +
                                        fmt("%.3g", ratio[2]) + "; max/min " + fmt("%.3f", band) + " (<= 10)"};
}

Outcome ratio_table() {
  auto r = run("ratio-table");
  double exp_max = r.summary["exponential_max_ratio"];
  double below = r.summary["tower_ratio_below_27"], target = r.summary["target_below_27"];
  double at = r.summary["tower_ratio_at_27"];
  // Exp(1), d = 2: E[Y ^ t] <= E Y = 1/4 while the lower side is >= 1
  bool bounded = exp_max <= 0.25 + 1e-9;
  return {bounded && below >= target - 1e-9,
          "exponential max ratio " + fmt("%.6f", exp_max) + "; tower at 27-: " + fmt("%.6f", below) + " vs t/(2 log t) " +
              fmt("%.6f", target) + " (at t = 27 exactly: " + fmt("%.6f", at) + ")"};
}

Outcome contour_count() {
  auto start = std::chrono::steady_clock::now();
  auto r = run("contour-count");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::vector<std::string> known{"1", "4", "20", "110", "638", "3832"};
  const auto& t = table(r, "contours");
  bool exact = t.rows.size() == known.size();
  for (std::size_t i = 0; exact && i < known.size(); ++i) exact = t.rows[i][1] == known[i];
  bool ok = exact && r.summary["within_bound"] && r.summary["symmetry_invariant"] && secs < 60.0;
  return {ok, std::string("n <= 6 counts ") + (exact ? "exact" : "WRONG") + ", bound " +
                  (r.summary["within_bound"] ? "holds" : "fails") + ", symmetry " +
                  (r.summary["symmetry_invariant"] ? "invariant" : "varies") + ", " + fmt("%.2f s", secs)};
}

Outcome timar() {
  auto r = run("timar");
  long probes = r.summary["probes"], ok = r.summary["star_connected"];
  return {probes == 200 && ok == 200, std::to_string(ok) + "/" + std::to_string(probes) + " *-connected"};
}

Outcome lemmas() {
  auto r = run("lemmas");
  const auto& reg = r.summary["regularity"];
  long trials = reg["trials"], inadmissible = reg["inadmissible"], viol = reg["violations"];
  bool bern = r.summary["bernstein_ok"], trunc = r.summary["truncation_nonincreasing"];
  const auto& b = table(r, "lemmas_bernstein");
  bool bern_reps = !b.rows.empty() && b.rows[0][5] == "10000";
  return {trials - inadmissible >= 10000 && viol == 0 && bern && bern_reps && trunc,
          "regularity " + std::to_string(viol) + " violations / " + std::to_string(trials - inadmissible) +
              " admissible; Bernstein " + (bern ? "within bound" : "EXCEEDED") + "; truncation failure frequency " +
              (trunc ? "nonincreasing" : "INCREASES")};
}

Outcome shielding() {
  auto r = run("shielding");
  long overlaps = r.summary["access_overlaps"], mism = r.summary["shield_mismatches"];
  double p = r.summary["p_value"];
  return {overlaps == 0 && mism == 0 && p > 0.01,
          "access overlaps " + std::to_string(overlaps) + ", shield mismatches " + std::to_string(mism) +
              ", chi-square p = " + fmt("%.4f", p) + " (> 0.01) over 10^4 replications"};
}

Outcome busemann() {
  auto r = run("busemann");
  long samples = r.summary["samples"], broken = r.summary["telescoping_failures"];
  double p05 = r.summary["p05_per_unit"];
  return {samples == 1000 && broken == 0 && p05 > 0.0,
          std::to_string(samples) + " samples, telescoping failures " + std::to_string(broken) +
              ", 5th percentile per unit " + fmt("%.4f", p05)};
}

Outcome determinism() {
  auto r = run("determinism");
  const auto& t = table(r, "determinism");
  bool same = r.summary["identical"];
  return {same && !t.rows.empty(), std::to_string(t.rows.size()) + " CSVs compared across reruns (1 vs 2 threads)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> all{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "closed-form ball", closed_form_ball},
      {3, "array-method identity", array_identity},
      {4, "smooth scaling exponent", smooth_scaling},
      {5, "rough scaling exponent", rough_scaling},
      {6, "rough-time density decay", rough_density},
      {7, "hole lower-bound order", hole_order},
      {8, "ratio table", ratio_table},
      {9, "contour counting", contour_count},
      {10, "exterior boundary *-connected", timar},
      {11, "lemma checkers", lemmas},
      {12, "shielding independence", shielding},
      {13, "Busemann increments", busemann},
      {14, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %2d  %-30s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}

// Acceptance gate: one PASS/FAIL line per criterion.
//
// Each criterion runs the relevant verification suites and then re-checks the
// recorded measurements against thresholds pinned here, independent of the
// thresholds the suites apply themselves. Wall-clock limits are pinned too.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bergman/verify.hpp"

namespace {

using bergman::Measurement;
using bergman::SuiteResult;

constexpr std::uint64_t kSeed = 1;

struct Check {
  std::string suite;
  std::string label;  // substring of the measurement label
  std::string relation;
  double bound;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;
  std::vector<std::function<SuiteResult()>> suites;
  std::vector<Check> checks;
  std::string required_note;  // substring that must appear in some note
};

bool holds(double v, const std::string& rel, double bound) {
  if (rel == "<") return v < bound;
  if (rel == "<=") return v <= bound;
  if (rel == ">") return v > bound;
  if (rel == ">=") return v >= bound;
  return v == bound;
}

bool evaluate(const Criterion& c, std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SuiteResult> results;
  for (const auto& s : c.suites) results.push_back(s());
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool ok = true;
  std::string first_failure;
  for (const auto& chk : c.checks) {
    int matched = 0;
    for (const auto& r : results) {
      if (r.name != chk.suite) continue;
      for (const Measurement& m : r.measurements) {
        if (m.label.find(chk.label) == std::string::npos) continue;
        ++matched;
        if (!holds(m.value, chk.relation, chk.bound)) {
          ok = false;
          if (first_failure.empty()) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s: %.6g not %s %.6g", m.label.c_str(), m.value, chk.relation.c_str(),
                          chk.bound);
            first_failure = buf;
          }
        }
      }
    }
    if (matched == 0) {
      ok = false;
      if (first_failure.empty()) first_failure = "no measurement '" + chk.label + "' in suite " + chk.suite;
    }
  }
  if (!c.required_note.empty()) {
    bool found = false;
    for (const auto& r : results)
      for (const auto& n : r.notes) found = found || n.find(c.required_note) != std::string::npos;
    if (!found) {
      ok = false;
      if (first_failure.empty()) first_failure = "missing note '" + c.required_note + "'";
    }
  }
  if (elapsed >= c.time_limit_s) {
    ok = false;
    if (first_failure.empty()) first_failure = "runtime over limit";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fs/%.0fs", elapsed, c.time_limit_s);
  detail = buf;
  if (!first_failure.empty()) detail += "; " + first_failure;
  return ok;
}

}  // namespace

int main() {
  using namespace bergman;
  const double mok_yau_constant = 1.0 / (4.0 * kPi) - 1e-6;

  const std::vector<Criterion> criteria{
      {1,
       "constant holomorphic sectional curvature on disc and balls",
       10.0,
       {[] { return suite_constant_curvature(kSeed); }},
       {{"constant_curvature", "disc: max |hsc + 2/(n+1)|", "<=", 1e-7},
        {"constant_curvature", "ball(2): max |hsc + 2/(n+1)|", "<=", 1e-7},
        {"constant_curvature", "ball(3): max |hsc + 2/(n+1)|", "<=", 1e-7}},
       {}},
      {2,
       "non-constant curvature on polydisc(2) and annulus(0.5)",
       10.0,
       {[] { return suite_constant_curvature(kSeed); }},
       {{"constant_curvature", "polydisc(2): hsc spread", ">=", 1e-2},
        {"constant_curvature", "annulus(0.5): hsc spread", ">=", 1e-2}},
       {}},
      {3,
       "two evaluations of the diastasis gradient length agree",
       20.0,
       {[] { return suite_identity_lemma(kSeed); }},
       {{"identity_lemma", "disc: max relative difference", "<=", 1e-8},
        {"identity_lemma", "ball(2): max relative difference", "<=", 1e-8},
        {"identity_lemma", "ball(3): max relative difference", "<=", 1e-8},
        {"identity_lemma", "annulus(0.5): max relative difference", "<=", 1e-8}},
       {}},
      {4,
       "closed-form diastasis and bounds on the ball family",
       20.0,
       {[] { return suite_theorem_bundle(kSeed); }},
       {{"theorem_bundle", "disc: max |closed-form diastasis", "<=", 1e-8},
        {"theorem_bundle", "ball(2): max |closed-form diastasis", "<=", 1e-8},
        {"theorem_bundle", "ball(3): max |closed-form diastasis", "<=", 1e-8},
        {"theorem_bundle", "disc: max Q", "<", 2.0},
        {"theorem_bundle", "ball(2): max Q", "<", 3.0},
        {"theorem_bundle", "ball(3): max Q", "<", 4.0},
        {"theorem_bundle", "disc: max |d Phi|^2_g", "<", 2.0},
        {"theorem_bundle", "ball(2): max |d Phi|^2_g", "<", 3.0},
        {"theorem_bundle", "ball(3): max |d Phi|^2_g", "<", 4.0}},
       {}},
      {5,
       "Gram kernels agree with closed forms",
       60.0,
       {[] { return suite_oracle(kSeed); }},
       {{"oracle", "disc: max relative error", "<=", 1e-6},
        {"oracle", "ball(2): max relative error", "<=", 1e-6},
        {"oracle", "polydisc(2): max relative error", "<=", 1e-6},
        {"oracle", "annulus(0.5): max relative error", "<=", 1e-6}},
       {}},
      {6,
       "annulus kernel zero and diastasis blow-up",
       30.0,
       {[] { return suite_annulus_counterexample(0.5, kSeed); }},
       {{"annulus_counterexample", "|K(zeta, z0)|", "<", 1e-10},
        {"annulus_counterexample", "approach to zeta: max Phi vs 30", ">", 30.0},
        {"annulus_counterexample", "outer circle: max Phi vs 30", ">", 30.0},
        {"annulus_counterexample", "inner circle: max Phi vs 30", ">", 30.0}},
       {}},
      {7,
       "Zimmer quantity unbounded and covering identity",
       5.0,
       {[] { return suite_zimmer(1000.0, kSeed); }},
       {{"zimmer", "witness with quantity > 1000", "==", 1.0},
        {"zimmer", "max relative covering identity residual", "<", 1e-12}},
       "quantity="},
      {8,
       "exhaustion Hessian is positive definite",
       20.0,
       {[] { return suite_hyperconvexity(kSeed); }},
       {{"hyperconvexity", "disc: min Hessian eigenvalue", ">", 1e-12},
        {"hyperconvexity", "ball(2): min Hessian eigenvalue", ">", 1e-12}},
       {}},
      {9,
       "boundary lower bound for K delta^2 (log delta)^2",
       10.0,
       {[] { return suite_mok_yau(kSeed); }},
       {{"mok_yau", "disc: inf K delta^2 (log delta)^2", ">=", mok_yau_constant},
        {"mok_yau", "ball(2): inf K delta^2 (log delta)^2", ">", 0.0}},
       {}},
      {10,
       "volume identity with the det g(p) factor",
       20.0,
       {[] { return suite_volume(kSeed); }},
       {{"volume", "disc: max residual with det g(p)", "<", 1e-8},
        {"volume", "ball(2): max residual with det g(p)", "<", 1e-8}},
       "normalization factor"},
      {11,
       "disc and punctured disc are indistinguishable",
       10.0,
       {[] { return suite_removability(kSeed); }},
       {{"removability", "byte-identical", "==", 1.0}, {"removability", "bit-identical", "==", 1.0}},
       {}},
      {12,
       "Skwarczynski distance matches the diastasis",
       5.0,
       {[] { return suite_skwarczynski(kSeed); }},
       {{"skwarczynski", "disc:", "<=", 1e-10},
        {"skwarczynski", "ball(2):", "<=", 1e-10},
        {"skwarczynski", "ball(3):", "<=", 1e-10},
        {"skwarczynski", "polydisc(2):", "<=", 1e-10},
        {"skwarczynski", "annulus(0.5):", "<=", 1e-10}},
       {}},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const bool ok = evaluate(c, detail);
    failed += ok ? 0 : 1;
    std::printf("%s  %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

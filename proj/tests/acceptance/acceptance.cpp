// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "subseries/catalog.hpp"
#include "subseries/ito_nisio.hpp"
#include "subseries/orlicz_pettis.hpp"
#include "subseries/parallel.hpp"

using namespace subseries;
namespace cli = subseries::cli;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1. Levy's maximal inequality on random catalog prefixes.
Result levy_suite() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(0x1e5);
  auto names = family_names();
  std::size_t held = 0, instances = 200;
  std::string first_failure;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto& name = names[rng() % names.size()];
    auto fam = catalog(name);
    auto length = static_cast<index_t>(2 + rng() % 11);
    auto terms = fam.series.exact_terms(length);
    double mass = 0;
    for (const auto& t : terms) mass += norm(t);
    // R uniform over (0, 1.1 * total mass], as a dyadic rational
    double u = double(1 + rng() % 1024) / 1024.0 * 1.1;
    Rational R = to_rational(std::max(mass * u, 1e-6));
    auto rep = levy_check_exhaustive(terms, R);
    if (rep.holds) {
      ++held;
    } else if (first_failure.empty()) {
      first_failure = "; first failure: " + name + " n=" + std::to_string(length) + " R=" + to_string(R);
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << held << "/" << instances << " instances hold" << first_failure << ", " << dt << " s (limit 60 s)";
  return {held == instances && dt < 60, d.str()};
}

// 2. Equidistribution of Sigma_M and Sigma_M - 2 Sigma_N, all N <= M <= 10.
Result equidistribution_suite() {
  auto t0 = Clock::now();
  std::size_t pairs = 0, equal = 0;
  std::string failures;
  for (const auto& name : family_names()) {
    auto terms = catalog(name).series.exact_terms(11);
    for (index_t M = 0; M <= 10; ++M) {
      for (index_t N = 0; N <= M; ++N) {
        ++pairs;
        if (equidistribution_check(terms, N, M).multiset_equal) {
          ++equal;
        } else {
          failures += " " + name + "(" + std::to_string(N) + "," + std::to_string(M) + ")";
        }
      }
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << equal << "/" << pairs << " (family, N, M) cases equal" << failures << ", " << dt << " s (limit 60 s)";
  return {equal == pairs && dt < 60, d.str()};
}

// 3. Sign/selector transform identities, exact.
Result transform_suite() {
  std::mt19937_64 rng(0x5e1ec7);
  auto names = family_names();
  std::size_t cases = 1000, ok = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    auto fam = catalog(names[rng() % names.size()]);
    const auto& s = fam.series;
    auto N = static_cast<index_t>(rng() % 65);
    std::vector<Rational> e, x;
    for (index_t n = 0; n <= N; ++n) {
      e.push_back(rng() & 1 ? 1 : -1);
      x.push_back(rng() & 1 ? 1 : 0);
    }
    auto eps = CoefficientSeq::from_list(CoefficientKind::Signs, e);
    auto chi = CoefficientSeq::from_list(CoefficientKind::Selectors, x);
    auto sp = sigma_from_s(eps);
    auto ss = s_from_sigma(chi);
    // Reference sums built term by term from the hand-transformed coefficients.
    Space exact = s.space().with_precision(Precision::ExactRational);
    ExactVector sigma(exact), plus(exact), minus(exact), sel(exact), all(exact), signs(exact);
    for (index_t n = 0; n <= N; ++n) {
      auto k = static_cast<std::size_t>(n);
      ExactVector t = s.exact_term(n);
      sigma.add_scaled(t, e[k]);
      plus.add_scaled(t, (1 + e[k]) / 2);
      minus.add_scaled(t, (1 - e[k]) / 2);
      sel.add_scaled(t, x[k]);
      all += t;
      signs.add_scaled(t, 2 * x[k] - 1);
    }
    bool sigma_ok = exact_partial_sum(s, eps, N) == sigma && sigma == plus - minus &&
                    exact_partial_sum(s, sp.plus, N) == plus && exact_partial_sum(s, sp.minus, N) == minus;
    ExactVector rhs = all * Rational(1, 2) + signs * Rational(1, 2);
    bool s_ok = exact_partial_sum(s, chi, N) == sel && sel == rhs && exact_partial_sum(s, ss.ones, N) == all &&
                exact_partial_sum(s, ss.signs, N) == signs;
    ok += sigma_ok && s_ok;
  }
  std::ostringstream d;
  d << ok << "/" << cases << " random (eps, chi, N <= 64) cases exact";
  return {ok == cases, d.str()};
}

// 4. Strong/weak dichotomy on the diagonal family.
Result dichotomy_suite() {
  auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream d;
  for (const char* alpha : {"0.4", "0.5", "0.6", "1.0"}) {
    Json r = cli::run_dichotomy({"l2_diagonal", {std::string("alpha=") + alpha}}, 1000, {}, {});
    const Json& res = r["result"];
    bool converges = parse_rational(alpha) > Rational(1, 2);
    auto frac = [&](const char* key) { return res[key].is_null() ? -1.0 : res[key].get<double>(); };
    double fs = frac("frac_strong"), fw = frac("frac_weak"), fu = res["frac_undecided"].get<double>();
    bool side = converges ? (fs >= 0.99 && fw >= 0.99) : (fs >= 0 && fs <= 0.01 && fw >= 0 && fw <= 0.01);
    bool ok = side && res["pass"] == true && res["disagreements"] == 0 && fu <= 0.05;
    pass = pass && ok;
    d << "alpha=" << alpha << ": strong " << fs << " weak " << fw << " undecided " << fu << "; ";
  }
  double dt = seconds_since(t0);
  d << dt << " s (limit 300 s)";
  return {pass && dt < 300, d.str()};
}

// 5. Block extraction and coarse random subseries.
Result op_suite() {
  bool pass = true;
  std::ostringstream d;
  cli::OpDemoOptions op;
  op.delta = "1";
  op.blocks = 8;
  op.samples = 1000;
  for (const char* name : {"c0_paired", "c0_basis"}) {
    Json r = cli::run_op_demo({name, {}}, op, {}, {});
    const Json& res = r["result"];
    bool ok = r["pass"] == true && res["extraction"]["found"].get<std::size_t>() >= 8;
    if (ok) {
      const Json& e = res["experiment"];
      ok = e["frac_sigma_fail_weak"] == 1.0 && e["frac_s_fail_weak"] == 1.0 && e["sigma"]["undecided"] == 0 &&
           e["s"]["undecided"] == 0;
      d << name << ": " << res["extraction"]["found"] << " blocks, fail fractions " << e["frac_sigma_fail_weak"]
        << "/" << e["frac_s_fail_weak"] << "; ";
    } else {
      d << name << ": failed; ";
    }
    pass = pass && ok;
  }
  for (auto [name, params] : {std::pair<const char*, std::vector<std::string>>{"l1_absolute", {}},
                              std::pair<const char*, std::vector<std::string>>{"l2_diagonal", {"alpha=1.0"}}}) {
    Json r = cli::run_op_demo({name, params}, op, {}, {});
    bool exhausted = r["result"]["extraction"]["budget_exhausted"] == true;
    d << name << ": " << (exhausted ? "BudgetExhausted after " + r["result"]["extraction"]["found"].dump() : "extracted")
      << "; ";
    pass = pass && exhausted;
  }
  return {pass, d.str()};
}

// 6. Weakly null, norm-one partial sums t^N.
Result counterexample_suite() {
  Json r = cli::run_counterexample(64, {});
  const Json& res = r["result"];
  std::size_t ok_rows = 0;
  for (const auto& row : res["rows"]) ok_rows += row["ok"] == true;
  std::ostringstream d;
  d << ok_rows << "/" << res["rows"].size() << " rows within mass/(N+1) with norm exactly 1; weak "
    << res["weak"]["outcome"].get<std::string>() << (res["weak_converges_to_zero"] == true ? " to 0" : "") << ", strong "
    << res["strong"]["outcome"].get<std::string>();
  return {r["pass"] == true && ok_rows == 65, d.str()};
}

// 7. Detector verdicts never contradict the oracles.
Result agreement_suite() {
  auto t0 = Clock::now();
  struct Entry {
    std::string name;
    Params params;
  };
  std::vector<Entry> families;
  for (const auto& name : family_names()) families.push_back({name, {}});
  families.push_back({"l2_diagonal", {{"alpha", Rational(1, 2)}}});
  families.push_back({"torus_fourier", {{"beta", Rational(1, 2)}}});

  const std::size_t samples = 100;
  std::size_t decided = 0, compared = 0, disagreements = 0, undecided = 0, unanswered = 0;
  std::size_t rechecked = 0, recheck_failures = 0;
  std::string first;
  const Seed root{0xa9ee, 0};
  for (std::size_t f = 0; f < families.size(); ++f) {
    auto fam = catalog(families[f].name, families[f].params);
    auto tests = detection_family(fam.series.space());
    Detector det(fam.series, Budget{}, tests);
    // Rechecking MonomialLinf certificates costs seconds each; spot-check a few.
    std::size_t recheck_limit = fam.spec.space.kind() == SpaceKind::MonomialLinf ? 5 : samples;
    struct Tally {
      std::size_t decided = 0, compared = 0, disagreements = 0, undecided = 0, unanswered = 0, rechecked = 0,
                  recheck_failures = 0;
      std::string first;
    };
    auto tallies = parallel_map(samples, [&](std::size_t j) {
      Tally t;
      Seed seed = root.substream(f).substream(j);
      CoefficientSeq c = j % 2 == 0 ? haar_signs(seed) : haar_selectors(seed);
      for (Predicate p : {Predicate::Strong, Predicate::Weak, Predicate::Bounded}) {
        ConvergenceVerdict v = p == Predicate::Strong ? det.strong(c) : p == Predicate::Weak ? det.weak(c) : det.bounded(c);
        if (v.outcome == Outcome::Undecided) {
          ++t.undecided;
          continue;
        }
        ++t.decided;
        try {
          Truth truth = oracle_verdict(fam.spec, p, c);
          ++t.compared;
          bool says_converges = v.outcome == Outcome::Converged;
          if (says_converges != (truth == Truth::Converges)) {
            ++t.disagreements;
            if (t.first.empty()) t.first = fam.series.name() + " sample " + std::to_string(j) + " " + to_string(p);
          }
        } catch (const OracleIncomplete&) {
          ++t.unanswered;
        }
        if (j / 2 < recheck_limit / 2 + 1) {
          ++t.rechecked;
          if (!recheck(fam.series, c, v, &tests).ok) ++t.recheck_failures;
        }
      }
      return t;
    });
    for (const auto& t : tallies) {
      decided += t.decided;
      compared += t.compared;
      disagreements += t.disagreements;
      undecided += t.undecided;
      unanswered += t.unanswered;
      rechecked += t.rechecked;
      recheck_failures += t.recheck_failures;
      if (first.empty()) first = t.first;
    }
  }
  std::ostringstream d;
  d << families.size() << " families x 3 predicates x " << samples << " samples: " << decided << " decided ("
    << compared << " compared with the oracle, " << unanswered << " outside its coverage), " << undecided
    << " undecided, " << disagreements << " disagreements" << (first.empty() ? "" : " (" + first + ")") << "; "
    << rechecked - recheck_failures << "/" << rechecked << " certificates recheck; " << seconds_since(t0) << " s";
  return {disagreements == 0 && recheck_failures == 0, d.str()};
}

// 8. Bounded but not strongly summable in c0.
Result boundary_suite() {
  auto fam = catalog("c0_basis");
  Detector det(fam.series, Budget{});
  auto ok = parallel_map(std::size_t{100}, [&](std::size_t j) {
    auto eps = haar_signs(Seed{0xb0, 0}.substream(j));
    auto b = det.bounded(eps);
    auto s = det.strong(eps);
    return b.outcome == Outcome::Converged && s.outcome == Outcome::Diverged && !s.heuristic;
  });
  auto count = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), true));
  return {count == 100, std::to_string(count) + "/100 sign samples bounded and strongly divergent"};
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(SUBSERIES_CLI_PATH) + " " + args;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// 9. Identical flags and seed give identical reports.
Result reproducibility_suite() {
  const std::vector<std::string> commands = {
      "levy --family l2_diagonal --n 10 --r 3/2 --seed 7",
      "equidist --family linf_monomial --m 8 --seed 7",
      "dichotomy --family l2_diagonal --param alpha=0.6 --samples 200 --seed 7",
      "dichotomy --family torus_fourier --samples 100 --seed 7 --threads 1",
      "op-demo --family c0_paired --delta 1 --blocks 8 --samples 200 --seed 7",
      "counterexample --n 32 --seed 7",
      "catalog --seed 7",
      "catalog --format csv",
  };
  std::size_t same = 0;
  std::string differing;
  for (const auto& c : commands) {
    Run a = run_cli(c), b = run_cli(c);
    bool equal = a.code == b.code && !a.out.empty();
    if (equal && c.find("--format csv") == std::string::npos) {
      equal = strip_timestamp(Json::parse(a.out)) == strip_timestamp(Json::parse(b.out));
    } else if (equal) {
      equal = a.out == b.out;
    }
    if (equal) {
      ++same;
    } else {
      differing += " [" + c + "]";
    }
  }
  std::ostringstream d;
  d << same << "/" << commands.size() << " commands reproduce byte-identical reports (timestamp excluded)" << differing;
  return {same == commands.size(), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"Levy maximal inequality, exhaustive", levy_suite},
      {"equidistribution of flipped sums", equidistribution_suite},
      {"sign/selector transform identities", transform_suite},
      {"strong/weak dichotomy", dichotomy_suite},
      {"block extraction and coarse subseries", op_suite},
      {"weakly null, norm-one partial sums", counterexample_suite},
      {"detector/oracle agreement", agreement_suite},
      {"bounded without strong summability in c0", boundary_suite},
      {"report reproducibility", reproducibility_suite},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.contains(id)) continue;
    Result o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

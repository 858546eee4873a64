#include "commands.hpp"

#include <sstream>

namespace subseries::cli {
namespace {

Family load(const FamilyOptions& f) {
  if (f.family.empty()) throw ContractViolation("--family is required");
  Params params;
  for (const auto& a : f.params) {
    auto [k, v] = parse_param(a);
    params[k] = v;
  }
  return catalog(f.family, params);
}

Json family_config(const Family& fam) { return {{"family", fam.spec.name}, {"params", to_json(fam.spec.params)}}; }

std::vector<ExactVector> prefix_terms(const Family& fam, std::size_t n) {
  if (n == 0) throw ContractViolation("--n must be >= 1");
  return fam.series.exact_terms(static_cast<index_t>(n));
}

}  // namespace

Budget BudgetOptions::to_budget() const {
  Budget b;
  b.n_max = n_max;
  b.eps_grid.clear();
  std::stringstream in(eps_grid);
  for (std::string item; std::getline(in, item, ',');) b.eps_grid.push_back(parse_rational(item));
  b.k_functionals = k_functionals;
  b.candidate_count = candidates;
  b.blowup_threshold = blowup;
  b.witness_factor = witness_factor;
  b.validate();
  return b;
}

Json run_levy(const FamilyOptions& f, std::size_t n, const std::string& R, const RunOptions& run) {
  Family fam = load(f);
  Rational r = parse_rational(R);
  LevyReport rep = levy_check_exhaustive(prefix_terms(fam, n), r);
  Json config = family_config(fam);
  config["n"] = n;
  config["R"] = to_json(r);
  config["seed"] = to_json(run.seed);
  return envelope("levy", config, to_json(rep), rep.holds);
}

Json run_equidist(const FamilyOptions& f, std::optional<index_t> n, index_t m, const RunOptions& run) {
  Family fam = load(f);
  if (m < 0) throw ContractViolation("--m must be >= 0");
  auto terms = prefix_terms(fam, static_cast<std::size_t>(m) + 1);
  Json rows = Json::array();
  bool all = true;
  auto check = [&](index_t N, index_t M) {
    auto rep = equidistribution_check(terms, N, M);
    all = all && rep.multiset_equal;
    rows.push_back(to_json(rep));
  };
  if (n) {
    check(*n, m);
  } else {
    for (index_t M = 0; M <= m; ++M) {
      for (index_t N = 0; N <= M; ++N) check(N, M);
    }
  }
  Json config = family_config(fam);
  config["n"] = n ? Json(*n) : Json("all");
  config["m"] = m;
  config["seed"] = to_json(run.seed);
  return envelope("equidist", config, {{"rows", rows}, {"multiset_equal", all}}, all);
}

Json run_dichotomy(const FamilyOptions& f, std::size_t samples, const BudgetOptions& b, const RunOptions& run) {
  Family fam = load(f);
  Budget budget = b.to_budget();
  auto rep = dichotomy_experiment(fam.series, samples, budget, detection_family(fam.series.space()), run.seed,
                                  run.threads);
  Json config = family_config(fam);
  config["samples"] = samples;
  config["budget"] = to_json(budget);
  config["seed"] = to_json(run.seed);
  return envelope("dichotomy", config, to_json(rep), rep.dichotomy_pass && !rep.inconclusive);
}

Json run_op_demo(const FamilyOptions& f, const OpDemoOptions& op, const BudgetOptions& b, const RunOptions& run) {
  Family fam = load(f);
  Budget budget = b.to_budget();
  Rational delta = op.delta ? parse_rational(*op.delta) : default_delta(fam.series, budget);
  BlockSet T = BlockSet::parse(op.T);
  Json config = family_config(fam);
  config["delta"] = to_json(delta);
  config["blocks"] = op.blocks;
  config["samples"] = op.samples;
  config["T"] = T.to_string();
  config["subset_search"] = op.subset_search;
  config["budget"] = to_json(budget);
  config["seed"] = to_json(run.seed);

  std::shared_ptr<const BlockPartition> part;
  try {
    part = std::make_shared<const BlockPartition>(
        extract_blocks(fam.series, delta, op.blocks, budget, {op.subset_search, BlockSearch{}.subset_width}));
  } catch (const BudgetExhausted& e) {
    Json result = {{"extraction",
                    {{"budget_exhausted", true}, {"found", e.found()}, {"requested", op.blocks}, {"detail", e.what()}}}};
    return envelope("op-demo", config, result, false);
  }
  auto rep = op_experiment(fam.series, part, T, op.samples, detection_family(fam.series.space()), budget, run.seed,
                           run.threads);
  Json result = {{"extraction", {{"budget_exhausted", false}, {"found", part->block_count()}, {"requested", op.blocks}}},
                 {"partition", to_json(*part)},
                 {"experiment", to_json(rep)}};
  std::size_t undecided = std::max(rep.sigma_undecided, rep.s_undecided);
  result["inconclusive"] = 5 * undecided > rep.samples;
  return envelope("op-demo", config, result, rep.pass);
}

Json run_counterexample(index_t n, const RunOptions& run) {
  if (n < 0) throw ContractViolation("--n must be >= 0");
  Family fam = catalog("linf_monomial");
  FunctionalFamily tests = monomial_test_family(Precision::ExactRational);
  std::vector<ExactFunctional> fs;
  std::vector<Rational> mass;
  for (long k = 0; k < 4; ++k) {
    fs.push_back(tests.enumerate_exact(Position(k)));
    mass.push_back(to_rational(density_sup(to_float(fs.back()))));
  }

  Json rows = Json::array();
  bool table_ok = true;
  ExactVector sum(fam.series.space().with_precision(Precision::ExactRational));
  for (index_t N = 0; N <= n; ++N) {
    sum += fam.series.exact_term(N);
    Json row = {{"N", N}};
    bool ok = true;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      Rational p = pair(fs[k], sum);
      Rational bound = mass[k] / Rational(N + 1);
      ok = ok && abs_value(p) <= bound;
      row["pair_" + std::to_string(k)] = to_json(p);
      row["bound_" + std::to_string(k)] = to_json(bound);
    }
    bool unit = compare_norm(sum, Rational(1)) == 0;
    row["norm_is_one"] = unit;
    row["ok"] = ok && unit;
    table_ok = table_ok && ok && unit;
    rows.push_back(row);
  }

  Detector detector(fam.series, Budget{}, detection_family(fam.series.space()));
  CoefficientSeq ones = CoefficientSeq::constant(CoefficientKind::Selectors, Rational(1));
  ConvergenceVerdict weak = detector.weak(ones);
  ConvergenceVerdict strong = detector.strong(ones);
  bool weak_to_zero = weak.outcome == Outcome::Converged && !weak.matches.empty() && weak.matches.back().candidate == -1;
  bool strong_fails = strong.outcome == Outcome::Diverged && !strong.heuristic;

  Json functionals = Json::array();
  const char* labels[] = {"1_[0,1]", "1_[0,1/2]", "t", "t^2"};
  for (std::size_t k = 0; k < fs.size(); ++k) {
    functionals.push_back({{"index", k}, {"density", labels[k]}, {"mass", to_json(mass[k])}});
  }
  Json result = {{"functionals", functionals},
                 {"rows", rows},
                 {"weak", to_json(weak)},
                 {"strong", to_json(strong)},
                 {"weak_converges_to_zero", weak_to_zero},
                 {"strong_diverges", strong_fails}};
  Json config = {{"family", "linf_monomial"}, {"n", n}, {"budget", to_json(Budget{})}, {"seed", to_json(run.seed)}};
  return envelope("counterexample", config, result, table_ok && weak_to_zero && strong_fails);
}

Json run_catalog(const RunOptions& run) {
  Json rows = Json::array();
  for (const auto& name : family_names()) rows.push_back(to_json(catalog(name).spec));
  return envelope("catalog", {{"seed", to_json(run.seed)}}, {{"rows", rows}}, true);
}

int exit_code(const Json& report) {
  if (report.value("pass", false)) return kOk;
  const Json& result = report["result"];
  if (result.value("inconclusive", false)) return kUndecided;
  return kFailed;
}

std::string render(const Json& report, const std::string& format) {
  if (format == "csv") return to_csv(report);
  if (format == "json") return report.dump(2) + "\n";
  throw ContractViolation("unknown format '" + format + "'");
}

}  // namespace subseries::cli

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = subseries::cli;

namespace {

struct Common {
  std::string format = "json";
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Write the report here instead of stdout");
  cmd->add_option("--seed", c.seed, "Seed (default: $SUBSERIES_SEED or a fixed constant)");
  cmd->add_option("--threads", c.threads, "Worker threads, 0 = all (results do not depend on it)");
}

void add_family(CLI::App* cmd, cli::FamilyOptions& f, bool required = true) {
  auto* opt = cmd->add_option("--family", f.family, "Catalog family");
  if (required) opt->required();
  cmd->add_option("--param", f.params, "Family parameter name=value (repeatable)");
}

void add_budget(CLI::App* cmd, cli::BudgetOptions& b) {
  cmd->add_option("--n-max", b.n_max, "Truncation bound")->capture_default_str();
  cmd->add_option("--eps-grid", b.eps_grid, "Decreasing tolerances, comma separated")->capture_default_str();
  cmd->add_option("--k-functionals", b.k_functionals, "Functionals scanned by weak detection")->capture_default_str();
  cmd->add_option("--candidates", b.candidates, "Candidate limits for weak detection")->capture_default_str();
  cmd->add_option("--blowup", b.blowup, "Partial-sum norm treated as blow-up")->capture_default_str();
  cmd->add_option("--witness-factor", b.witness_factor, "Witness search cap, in multiples of n_max+1")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random series and Orlicz-Pettis experiments"};
  app.require_subcommand(1);

  Common common;
  cli::FamilyOptions family;
  cli::BudgetOptions budget;

  std::size_t levy_n = 10;
  std::string levy_r = "1";
  auto* levy = app.add_subcommand("levy", "Exhaustive Levy maximal inequality over a family prefix");
  add_family(levy, family);
  levy->add_option("--n", levy_n, "Number of terms (<= 20)")->capture_default_str();
  levy->add_option("--r", levy_r, "Radius R > 0 (rational)")->capture_default_str();
  add_common(levy, common);

  std::optional<subseries::index_t> eq_n;
  subseries::index_t eq_m = 10;
  auto* equidist = app.add_subcommand("equidist", "Exact equidistribution of Sigma_M and Sigma_M - 2 Sigma_N");
  add_family(equidist, family);
  equidist->add_option("--n", eq_n, "N (default: every 0 <= N <= M' <= M)");
  equidist->add_option("--m", eq_m, "M (<= 19)")->capture_default_str();
  add_common(equidist, common);

  std::size_t samples = 1000;
  auto* dichotomy = app.add_subcommand("dichotomy", "Strong/weak zero-one experiment under random signs");
  add_family(dichotomy, family);
  dichotomy->add_option("--samples", samples, "Sign samples (>= 100)")->capture_default_str();
  add_budget(dichotomy, budget);
  add_common(dichotomy, common);

  cli::OpDemoOptions op;
  auto* op_demo = app.add_subcommand("op-demo", "Block extraction and coarse random subseries experiment");
  add_family(op_demo, family);
  op_demo->add_option("--delta", op.delta, "Block norm lower bound (default: half the largest tail gap)");
  op_demo->add_option("--blocks", op.blocks, "Blocks to extract")->capture_default_str();
  op_demo->add_option("--samples", op.samples, "Coarse sign samples")->capture_default_str();
  op_demo->add_option("--T", op.T, "Block ids kept: all, none, even, odd or a list like 0,2,5")->capture_default_str();
  op_demo->add_flag("--subset-search", op.subset_search, "Also search non-contiguous blocks (exponential)");
  add_budget(op_demo, budget);
  add_common(op_demo, common);

  subseries::index_t ce_n = 64;
  auto* counterexample = app.add_subcommand("counterexample", "Sigma_N = t^N: weakly null but not norm convergent");
  counterexample->add_option("--n", ce_n, "Largest N in the table")->capture_default_str();
  add_common(counterexample, common);

  auto* catalog = app.add_subcommand("catalog", "List the series families");
  add_common(catalog, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    cli::RunOptions run;
    if (common.seed) run.seed = {*common.seed, 0};
    run.threads = common.threads;

    subseries::Json report;
    if (*levy) {
      report = cli::run_levy(family, levy_n, levy_r, run);
    } else if (*equidist) {
      report = cli::run_equidist(family, eq_n, eq_m, run);
    } else if (*dichotomy) {
      report = cli::run_dichotomy(family, samples, budget, run);
    } else if (*op_demo) {
      report = cli::run_op_demo(family, op, budget, run);
    } else if (*counterexample) {
      report = cli::run_counterexample(ce_n, run);
    } else {
      report = cli::run_catalog(run);
    }

    std::string text = cli::render(report, common.format);
    if (common.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(common.out, std::ios::binary);
      if (!file) throw subseries::ContractViolation("cannot open " + common.out);
      file << text;
    }
    return cli::exit_code(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kFailed;
  }
}

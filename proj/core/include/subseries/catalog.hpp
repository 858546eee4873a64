#pragma once

/**
 * @file catalog.hpp
 * @brief Series families with analytic oracles.
 *
 * | name          | space        | x_n                                  |
 * |---------------|--------------|--------------------------------------|
 * | l2_diagonal   | SeqL2        | e_n / (n+1)^alpha   (alpha, default 1) |
 * | l1_absolute   | SeqL1        | e_n * 2^-n                           |
 * | c0_basis      | SeqC0        | e_n                                  |
 * | c0_paired     | SeqC0        | x_{2k} = e_k, x_{2k+1} = -e_k        |
 * | linf_monomial | MonomialLinf | x_0 = 1, x_n = t^n - t^(n-1)         |
 * | torus_fourier | TorusTrig    | e^{i n theta} / (n+1)^beta (beta, default 1) |
 */

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "subseries/norming.hpp"
#include "subseries/series.hpp"

namespace subseries {

using Params = std::map<std::string, Rational>;

/// Oracle answers for the series as written (every coefficient 1).
struct OracleSummary {
  bool unconditional = false;
  Truth strong_as = Truth::Diverges;
  Truth weak_as = Truth::Diverges;
  bool bounded_as = false;
};

struct FamilySpec {
  std::string name;
  Params params;  // effective parameters, defaults filled in
  Space space;
  OracleSummary oracle;
  std::string description;
  std::shared_ptr<const SeriesOracle> analytic;
};

struct Family {
  FormalSeries series;
  FamilySpec spec;
};

/// Throws UnknownFamily for unknown names and ContractViolation for unknown
/// or invalid parameters.
Family catalog(const std::string& name, const Params& params = {});

std::vector<std::string> family_names();

/// Closed-form answer; throws OracleIncomplete when the family cannot decide
/// the predicate for this coefficient law.
Truth oracle_verdict(const FamilySpec& spec, Predicate predicate, const CoefficientSeq& coeffs);

/// Functionals used to probe weak convergence: the norming family, or the
/// test densities for MonomialLinf, which has none.
FunctionalFamily detection_family(const Space& space);

/// Parses "alpha=0.6" style assignments.
std::pair<std::string, Rational> parse_param(const std::string& assignment);

}  // namespace subseries

#include "subseries/catalog.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/zeta.hpp>

namespace subseries {
namespace {

/// What the oracles need to know about a coefficient law.
struct LawFacts {
  CoefficientProfile profile;
  double bound = 0.0;                  // sup |c_n|
  std::optional<index_t> last;         // finite support: last possibly nonzero index
  std::optional<Rational> min_nonzero;

  explicit LawFacts(const CoefficientSeq& c)
      : profile(subseries::profile(c)), bound(c.sup_abs().get_d()), last(last_nonzero_bound(c)),
        min_nonzero(min_nonzero_magnitude(c)) {}

  bool opaque() const { return profile.opaque; }
  bool finite() const { return !opaque() && profile.finite_support; }
  /// Infinitely many coefficients with |c_n| >= min_nonzero (almost surely
  /// for random laws), on a set of indices of positive density.
  bool infinitely_nonvanishing() const {
    return !opaque() && !profile.finite_support && min_nonzero && (profile.random || profile.constant);
  }
};

OracleAnswer converges(std::string why) { return {Truth::Converges, std::move(why)}; }
OracleAnswer diverges(std::string why) { return {Truth::Diverges, std::move(why)}; }

[[noreturn]] void incomplete(const std::string& family, Predicate p) {
  throw OracleIncomplete(family + ": no closed form for the " + to_string(p) + " predicate under this coefficient law");
}

/// x_n = a_n u_n with orthonormal u_n and a_n = (n+1)^(-s/2): l2_diagonal and
/// torus_fourier share this oracle.
class OrthogonalOracle final : public SeriesOracle {
 public:
  OrthogonalOracle(std::string family, double s) : family_(std::move(family)), s_(s) {}

  OracleAnswer decide(Predicate p, const CoefficientSeq& c) const override {
    if (p == Predicate::Unconditional) {
      return s_ > 1 ? converges("sum (n+1)^-2a < infinity") : diverges("sum (n+1)^-2a = infinity");
    }
    LawFacts law(c);
    if (law.finite()) return converges("finitely many nonzero coefficients");
    if (s_ > 1) {
      if (p == Predicate::Bounded) return converges("||Sigma_N||^2 <= B^2 zeta(2a)");
      return converges("orthogonal terms with sum B^2 (n+1)^-2a < infinity, for every bounded coefficient sequence");
    }
    if (law.infinitely_nonvanishing()) {
      switch (p) {
        case Predicate::Strong:
          return diverges("orthogonal tails: sum over a positive-density index set of (n+1)^-2a diverges");
        case Predicate::Weak:
          return diverges("||Sigma_N|| -> infinity and weakly convergent sequences are bounded");
        case Predicate::Bounded:
          return diverges("||Sigma_N||^2 = sum c_n^2 (n+1)^-2a -> infinity");
        default: break;
      }
    }
    incomplete(family_, p);
  }

  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    LawFacts law(c);
    if (law.finite()) {
      if (*law.last < M) return 0.0;
      double sum = 0.0;
      for (index_t n = M; n <= *law.last; ++n) sum += std::pow(static_cast<double>(n + 1), -s_);
      return law.bound * std::sqrt(sum);
    }
    if (law.opaque() || s_ <= 1) return std::nullopt;
    double m1 = static_cast<double>(M + 1);
    return law.bound * std::sqrt(std::pow(m1, -s_) + std::pow(m1, 1 - s_) / (s_ - 1));
  }

  // For s close to 1 the tail index overflows index_t. Since
  // (M+1)^-s <= (M+1)^(1-s), the tail bound is <= eps as soon as
  // (M+1)^(s-1) >= B^2 s / ((s-1) eps^2).
  std::optional<mpz_class> tail_index(const CoefficientSeq& c, double eps) const override {
    LawFacts law(c);
    if (law.finite() || law.opaque() || s_ <= 1 || law.bound == 0) return SeriesOracle::tail_index(c, eps);
    double log_m1 = std::log(law.bound * law.bound * s_ / ((s_ - 1) * eps * eps)) / (s_ - 1);
    if (log_m1 < 40) return SeriesOracle::tail_index(c, eps);
    // Round up generously: 2^ceil(log2(M+1)) + 1 dominates any float error in log_m1.
    auto bits = static_cast<unsigned long>(std::ceil(log_m1 / std::log(2.0) * (1 + 1e-9))) + 1;
    mpz_class m1;
    mpz_ui_pow_ui(m1.get_mpz_t(), 2, bits);
    return mpz_class(m1 - 2);  // n0 = M - 1
  }

  std::optional<double> persistent_gap(const CoefficientSeq& c) const override {
    LawFacts law(c);
    if (s_ <= 1 && law.infinitely_nonvanishing()) return std::numeric_limits<double>::infinity();
    return std::nullopt;
  }

  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override {
    LawFacts law(c);
    if (law.finite()) return tail_bound(c, 0);
    if (law.opaque() || s_ <= 1) return std::nullopt;
    return law.bound * std::sqrt(boost::math::zeta(s_));
  }

  std::string describe() const override {
    return family_ + ": orthogonal terms of norm (n+1)^-a, 2a = " + std::to_string(s_);
  }

 private:
  std::string family_;
  double s_;
};

class L1AbsoluteOracle final : public SeriesOracle {
 public:
  OracleAnswer decide(Predicate p, const CoefficientSeq&) const override {
    if (p == Predicate::Bounded) return converges("||Sigma_N|| <= B sum 2^-n = 2B");
    return converges("absolutely convergent: sum ||c_n x_n|| <= B sum 2^-n");
  }
  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    return c.sup_abs().get_d() * std::ldexp(1.0, static_cast<int>(std::max<index_t>(1 - M, -2000)));
  }
  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override { return 2 * c.sup_abs().get_d(); }
  std::string describe() const override { return "l1_absolute: sum of norms 2"; }
};

class C0BasisOracle final : public SeriesOracle {
 public:
  OracleAnswer decide(Predicate p, const CoefficientSeq& c) const override {
    if (p == Predicate::Unconditional) return diverges("every term has norm 1");
    if (p == Predicate::Bounded) return converges("disjoint supports: ||Sigma_N|| = max |c_n| <= B");
    LawFacts law(c);
    if (law.finite()) return converges("finitely many nonzero coefficients");
    if (law.infinitely_nonvanishing()) {
      if (p == Predicate::Strong) return diverges("infinitely many terms c_n e_n with |c_n| >= " + to_string(*law.min_nonzero));
      return diverges("coordinatewise limit (c_n) is not in c0");
    }
    incomplete("c0_basis", p);
  }
  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    LawFacts law(c);
    if (!law.finite()) return std::nullopt;
    return *law.last < M ? 0.0 : law.bound;
  }
  std::optional<double> persistent_gap(const CoefficientSeq& c) const override {
    LawFacts law(c);
    if (law.infinitely_nonvanishing()) return law.min_nonzero->get_d();
    return std::nullopt;
  }
  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override { return c.sup_abs().get_d(); }
  std::string describe() const override { return "c0_basis: unit vector basis of c0"; }
};

class C0PairedOracle final : public SeriesOracle {
 public:
  OracleAnswer decide(Predicate p, const CoefficientSeq& c) const override {
    if (p == Predicate::Unconditional) return diverges("the subseries of even terms sums blocks {2k} of norm 1");
    if (p == Predicate::Bounded) return converges("each coordinate is c_2k - c_2k+1: ||Sigma_N|| <= 2B");
    LawFacts law(c);
    if (law.finite()) return converges("finitely many nonzero coefficients");
    if (!law.infinitely_nonvanishing()) incomplete("c0_paired", p);
    if (p == Predicate::Strong) {
      return diverges("infinitely many single terms of norm >= " + to_string(*law.min_nonzero));
    }
    if (!law.profile.random && law.profile.full) {
      return converges("coordinate k is eventually c - c = 0: weakly null");
    }
    return diverges("coordinate k is eventually c_2k - c_2k+1, nonzero infinitely often: limit not in c0");
  }
  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    LawFacts law(c);
    if (!law.finite()) return std::nullopt;
    return *law.last < M ? 0.0 : 2 * law.bound;
  }
  std::optional<double> persistent_gap(const CoefficientSeq& c) const override {
    LawFacts law(c);
    if (law.infinitely_nonvanishing()) return law.min_nonzero->get_d();
    return std::nullopt;
  }
  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override {
    return 2 * c.sup_abs().get_d();
  }
  std::string describe() const override { return "c0_paired: e_0, -e_0, e_1, -e_1, ..."; }
};

class LinfMonomialOracle final : public SeriesOracle {
 public:
  OracleAnswer decide(Predicate p, const CoefficientSeq& c) const override {
    if (p == Predicate::Unconditional) return diverges("the all-one subseries sums to t^N, not uniformly Cauchy");
    if (p == Predicate::Weak) {
      return converges("for an L1 density g, sum |<g, x_n>| <= ||g||_1 since sum_n |x_n(t)| <= 2 pointwise");
    }
    if (p == Predicate::Bounded) return converges("|Sigma_N(t)| <= B (1 + sum t^(n-1)(1-t)) <= 2B");
    LawFacts law(c);
    if (law.finite()) return converges("finitely many nonzero coefficients");
    if (law.opaque() || !law.profile.full) incomplete("linf_monomial", p);
    if (!law.profile.random && law.profile.constant && *law.profile.constant != 0) {
      return diverges("telescoping: sum_{M..N} = c (t^N - t^(M-1)), sup norm -> |c|");
    }
    if (law.profile.random) {
      if (law.profile.offset == 0) {
        return converges("summation by parts with the law of the iterated logarithm: tails are uniformly small a.s.");
      }
      return diverges("offset part telescopes to o (t^N - t^(M-1)); the symmetric part is uniformly Cauchy a.s.");
    }
    incomplete("linf_monomial", p);
  }
  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    LawFacts law(c);
    if (!law.finite()) return std::nullopt;
    return *law.last < M ? 0.0 : 2 * law.bound;
  }
  std::optional<double> persistent_gap(const CoefficientSeq& c) const override {
    LawFacts law(c);
    if (law.finite() || law.opaque() || !law.profile.full) return std::nullopt;
    if (!law.profile.random && law.profile.constant && *law.profile.constant != 0) {
      return abs_value(*law.profile.constant).get_d() / 2;
    }
    if (law.profile.random && law.profile.offset != 0) return abs_value(law.profile.offset).get_d() / 2;
    return std::nullopt;
  }
  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override {
    return 2 * c.sup_abs().get_d();
  }
  std::string describe() const override { return "linf_monomial: Sigma_N = t^N under the sup norm"; }
};

Rational two_pow_neg(index_t n) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(n));
  return Rational(mpz_class(1), den);
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Params with_defaults(const std::string& name, const Params& given, const Params& defaults) {
  Params out = defaults;
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) throw ContractViolation(name + " has no parameter '" + k + "'");
    out[k] = v;
  }
  return out;
}

/// Term generator for x_n = (n+1)^-a u_n with orthonormal u_n at index idx(n).
template <typename IndexOf>
FormalSeries orthogonal_series(Space space, const Rational& a, std::string name,
                               std::shared_ptr<const SeriesOracle> oracle, IndexOf idx) {
  double ad = a.get_d();
  FormalSeries::ExactTermFn exact;
  if (is_integer(a) && a >= 0) {
    unsigned long k = a.get_num().get_ui();
    exact = [space, k, idx](index_t n) {
      return ExactVector::basis(space.with_precision(Precision::ExactRational), idx(n),
                                Rational(1) / subseries::pow(Rational(n + 1), k));
    };
  }
  return FormalSeries(
      space,
      [space, ad, idx](index_t n) {
        return FloatVector::basis(space, idx(n), std::pow(static_cast<double>(n + 1), -ad));
      },
      std::move(name), std::move(oracle), std::nullopt, exact);
}

}  // namespace

std::vector<std::string> family_names() {
  return {"l2_diagonal", "l1_absolute", "c0_basis", "c0_paired", "linf_monomial", "torus_fourier"};
}

Family catalog(const std::string& name, const Params& params) {
  Params eff;
  std::shared_ptr<const SeriesOracle> oracle;
  std::string description;
  std::optional<FormalSeries> series;

  if (name == "l2_diagonal" || name == "torus_fourier") {
    bool torus = name == "torus_fourier";
    const char* key = torus ? "beta" : "alpha";
    eff = with_defaults(name, params, {{key, Rational(1)}});
    Rational a = eff.at(key);
    if (a < 0) throw ContractViolation(name + ": " + key + " must be >= 0");
    oracle = std::make_shared<OrthogonalOracle>(name, 2 * a.get_d());
    if (torus) {
      description = "x_n = (n+1)^-beta e^{i n theta} in L2 of the circle";
      series = orthogonal_series(Space::torus_trig(), a, name, oracle, [](index_t n) { return n; });
    } else {
      description = "x_n = e_n / (n+1)^alpha in l2";
      series = orthogonal_series(Space::seq_l2(), a, name, oracle, [](index_t n) { return n; });
    }
  } else if (name == "l1_absolute") {
    eff = with_defaults(name, params, {});
    oracle = std::make_shared<L1AbsoluteOracle>();
    description = "x_n = e_n 2^-n in l1";
    Space space = Space::seq_l1();
    series = FormalSeries(
        space, [space](index_t n) { return FloatVector::basis(space, n, std::ldexp(1.0, -static_cast<int>(std::min<index_t>(n, 2000)))); },
        name, oracle, std::nullopt,
        [space](index_t n) { return ExactVector::basis(space.with_precision(Precision::ExactRational), n, two_pow_neg(n)); });
  } else if (name == "c0_basis") {
    eff = with_defaults(name, params, {});
    oracle = std::make_shared<C0BasisOracle>();
    description = "x_n = e_n in c0";
    Space space = Space::seq_c0();
    series = FormalSeries(
        space, [space](index_t n) { return FloatVector::basis(space, n, 1.0); }, name, oracle, std::nullopt,
        [space](index_t n) { return ExactVector::basis(space.with_precision(Precision::ExactRational), n, Rational(1)); });
  } else if (name == "c0_paired") {
    eff = with_defaults(name, params, {});
    oracle = std::make_shared<C0PairedOracle>();
    description = "x_2k = e_k, x_2k+1 = -e_k in c0";
    Space space = Space::seq_c0();
    series = FormalSeries(
        space, [space](index_t n) { return FloatVector::basis(space, n / 2, n % 2 == 0 ? 1.0 : -1.0); }, name, oracle,
        std::nullopt, [space](index_t n) {
          return ExactVector::basis(space.with_precision(Precision::ExactRational), n / 2, Rational(n % 2 == 0 ? 1 : -1));
        });
  } else if (name == "linf_monomial") {
    eff = with_defaults(name, params, {});
    oracle = std::make_shared<LinfMonomialOracle>();
    description = "x_0 = 1, x_n = t^n - t^(n-1) in C[0,1]; Sigma_N = t^N";
    Space space = Space::monomial_linf();
    series = FormalSeries(
        space,
        [space](index_t n) {
          return n == 0 ? FloatVector::basis(space, 0, 1.0) : FloatVector(space, Entries<double>{{n - 1, -1.0}, {n, 1.0}});
        },
        name, oracle, std::nullopt,
        [space](index_t n) {
          Space exact = space.with_precision(Precision::ExactRational);
          return n == 0 ? ExactVector::basis(exact, 0, Rational(1))
                        : ExactVector(exact, Entries<Rational>{{n - 1, Rational(-1)}, {n, Rational(1)}});
        });
  } else {
    throw UnknownFamily("unknown family '" + name + "'");
  }

  FamilySpec spec{name, eff, series->space(), {}, description, oracle};
  CoefficientSeq ones = CoefficientSeq::constant(CoefficientKind::Selectors, Rational(1));
  spec.oracle.unconditional = oracle->decide(Predicate::Unconditional, ones).truth == Truth::Converges;
  spec.oracle.strong_as = oracle->decide(Predicate::Strong, ones).truth;
  spec.oracle.weak_as = oracle->decide(Predicate::Weak, ones).truth;
  spec.oracle.bounded_as = oracle->decide(Predicate::Bounded, ones).truth == Truth::Converges;
  return {std::move(*series), std::move(spec)};
}

Truth oracle_verdict(const FamilySpec& spec, Predicate predicate, const CoefficientSeq& coeffs) {
  if (!spec.analytic) throw OracleIncomplete(spec.name + " has no analytic oracle");
  return spec.analytic->decide(predicate, coeffs).truth;
}

FunctionalFamily detection_family(const Space& space) {
  if (space.kind() == SpaceKind::MonomialLinf) return monomial_test_family(space.precision());
  return norming_family(space);
}

std::pair<std::string, Rational> parse_param(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ContractViolation("parameter must look like name=value: " + assignment);
  return {assignment.substr(0, eq), parse_rational(assignment.substr(eq + 1))};
}

}  // namespace subseries

#include "subseries/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "subseries/accumulator.hpp"

namespace subseries {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::Diverged: return "diverged";
    case Outcome::Undecided: return "undecided";
  }
  return "?";
}

void Budget::validate() const {
  if (n_max < 1) throw ContractViolation("budget n_max must be >= 1");
  if (eps_grid.empty()) throw ContractViolation("budget eps_grid must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (sgn(eps_grid[i]) <= 0) throw ContractViolation("budget eps_grid must be strictly positive");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw ContractViolation("budget eps_grid must be decreasing");
  }
  if (k_functionals < 1) throw ContractViolation("budget k_functionals must be >= 1");
  if (candidate_count < 2) throw ContractViolation("budget candidate_count must be >= 2");
  if (!(blowup_threshold > 0)) throw ContractViolation("budget blowup_threshold must be positive");
  if (witness_factor < 1) throw ContractViolation("budget witness_factor must be >= 1");
}

namespace {

constexpr double kRelTol = 1e-9;

FloatVector sum_range(const Space& space, const std::vector<FloatVector>& terms, const CoefficientSeq& c,
                      index_t lo, index_t hi) {
  Entries<double> e;
  for (index_t n = std::max<index_t>(lo, 0); n <= hi; ++n) {
    double cn = c.value(n);
    if (cn == 0.0) continue;
    for (const auto& [i, x] : terms[static_cast<std::size_t>(n)].entries()) e.emplace_back(i, cn * x);
  }
  return FloatVector(space, std::move(e));
}

}  // namespace

struct Detector::Scan {
  std::vector<double> norms;   // ||Sigma_N||
  std::vector<double> d;       // ||Sigma_{n_max} - Sigma_N||
  std::vector<double> suffix;  // max_{N' >= N} d[N']
  double observed_sup = 0.0;
  struct Frontier {
    index_t m;
    index_t argmax;
    double gap;  // max_{m < N <= n_max} ||Sigma_N - Sigma_m||
  };
  std::vector<Frontier> frontier;

  /// Smallest N with 2 * suffix[N] <= eps.
  index_t stabilization(double eps) const {
    auto n = static_cast<index_t>(suffix.size());
    index_t lo = 0, hi = n - 1;  // suffix[n-1] = d[n_max] = 0
    while (lo < hi) {
      index_t mid = lo + (hi - lo) / 2;
      if (2.0 * suffix[static_cast<std::size_t>(mid)] <= eps) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }
};

Detector::Detector(FormalSeries series, Budget budget, std::optional<FunctionalFamily> family)
    : series_(std::move(series)), budget_(std::move(budget)), family_(std::move(family)) {
  budget_.validate();
  terms_.reserve(static_cast<std::size_t>(budget_.n_max) + 1);
  for (index_t n = 0; n <= budget_.n_max; ++n) terms_.push_back(series_.term(n));
  if (family_) {
    if (family_->space().kind() != series_.space().kind() ||
        family_->space().with_precision(Precision::Float64) != series_.space()) {
      throw ContractViolation("functional family lives on " + family_->space().name() + ", series on " +
                              series_.space().name());
    }
    functionals_ = family_->first(budget_.k_functionals);
    pairings_.resize(terms_.size());
    for (std::size_t n = 0; n < terms_.size(); ++n) {
      if (terms_[n].is_zero()) continue;
      for (std::size_t k = 0; k < functionals_.size(); ++k) {
        double p = pair(functionals_[k], terms_[n]);
        if (p != 0.0) pairings_[n].emplace_back(k, p);
      }
    }
  }
}

const FloatVector& Detector::term(index_t n) const { return terms_[static_cast<std::size_t>(n)]; }

FloatVector Detector::term_or_generate(index_t n) const {
  return n <= budget_.n_max ? term(n) : series_.term(n);
}

std::optional<OracleAnswer> Detector::ask(Predicate p, const CoefficientSeq& c) const {
  if (!series_.oracle()) return std::nullopt;
  try {
    return series_.oracle()->decide(p, c);
  } catch (const OracleIncomplete&) {
    return std::nullopt;
  }
}

Detector::Scan Detector::scan(const CoefficientSeq& c) const {
  const index_t n_max = budget_.n_max;
  const auto size = static_cast<std::size_t>(n_max) + 1;
  Scan sc;
  sc.norms.resize(size);
  sc.d.resize(size);
  sc.suffix.resize(size);

  NormAccumulator acc(series_.space());
  for (index_t n = 0; n <= n_max; ++n) {
    acc.add(term(n), c.value(n));
    sc.norms[static_cast<std::size_t>(n)] = acc.norm();
  }
  sc.observed_sup = *std::max_element(sc.norms.begin(), sc.norms.end());

  // acc holds Sigma_{n_max}; peel terms off the front.
  for (index_t n = 0; n <= n_max; ++n) {
    acc.add(term(n), -c.value(n));
    sc.d[static_cast<std::size_t>(n)] = n == n_max ? 0.0 : acc.norm();
  }
  double running = 0.0;
  for (std::size_t i = size; i-- > 0;) {
    running = std::max(running, sc.d[i]);
    sc.suffix[i] = running;
  }

  std::set<index_t> marks;
  for (index_t num : {4, 5, 6, 7}) marks.insert(num * n_max / 8);
  for (index_t m : marks) {
    if (m >= n_max) continue;
    NormAccumulator tail(series_.space());
    Scan::Frontier fr{m, m, 0.0};
    for (index_t n = m + 1; n <= n_max; ++n) {
      double cn = c.value(n);
      if (cn == 0.0) continue;
      tail.add(term(n), cn);
      double g = tail.norm();
      if (g > fr.gap) {
        fr.gap = g;
        fr.argmax = n;
      }
    }
    sc.frontier.push_back(fr);
  }
  return sc;
}

std::optional<GapWitness> Detector::search_gap(const CoefficientSeq& c, index_t m, double delta,
                                               const Rational& delta_exact) const {
  const index_t cap = budget_.witness_factor * (budget_.n_max + 1);
  NormAccumulator acc(series_.space());
  for (index_t n = m; n <= cap; ++n) {
    double cn = c.value(n);
    if (cn == 0.0) continue;
    acc.add(term_or_generate(n), cn);
    double g = acc.norm();
    if (g >= delta) return GapWitness{m, n, g, delta_exact};
  }
  return std::nullopt;
}

ConvergenceVerdict Detector::strong(const CoefficientSeq& c) const {
  ConvergenceVerdict v;
  v.predicate = Predicate::Strong;
  v.budget = budget_;
  const index_t n_max = budget_.n_max;
  Scan sc = scan(c);
  v.observed_sup = sc.observed_sup;

  std::vector<Stabilization> scanned;
  bool scan_converged = true;
  for (const auto& eps : budget_.eps_grid) {
    index_t n0 = sc.stabilization(eps.get_d());
    scanned.push_back({eps, mpz_class(n0), "scan", false});
    scan_converged = scan_converged && n0 <= n_max / 2;
  }
  auto converged_by_scan = [&] {
    v.outcome = Outcome::Converged;
    v.limit = sum_range(series_.space(), terms_, c, 0, n_max);
    v.stabilization = scanned;
  };

  auto answer = ask(Predicate::Strong, c);
  if (answer) v.oracle_reason = answer->reason;

  if (answer && answer->truth == Truth::Converges) {
    const SeriesOracle& oracle = *series_.oracle();
    if (!oracle.tail_bound(c, 1)) {
      if (scan_converged) {
        converged_by_scan();
      } else {
        v.note = "oracle confirms convergence without a tail bound; scan did not stabilize with margin";
      }
      return v;
    }
    std::vector<Stabilization> certified;
    for (const auto& eps : budget_.eps_grid) {
      auto n0 = oracle.tail_index(c, eps.get_d());
      if (!n0) {
        v.note = "oracle tail bound never drops below " + to_string(eps);
        return v;
      }
      if (*n0 <= n_max) {
        // Both Sigma_N (N >= n0) and Sigma_{n_max} lie within eps of Sigma_{n0}.
        double observed = sc.suffix[static_cast<std::size_t>(n0->get_si())];
        if (observed > eps.get_d() * (1 + kRelTol)) {
          v.note = "oracle tail bound contradicted by the scan at eps = " + to_string(eps);
          return v;
        }
      }
      certified.push_back({eps, *n0, "oracle", *n0 > n_max});
    }
    v.outcome = Outcome::Converged;
    v.limit = sum_range(series_.space(), terms_, c, 0, n_max);
    v.stabilization = std::move(certified);
    return v;
  }

  if (answer && answer->truth == Truth::Diverges) {
    auto gap = series_.oracle()->persistent_gap(c);
    if (!gap || !(*gap > 0)) {
      v.note = "oracle confirms divergence without a gap bound";
      return v;
    }
    Rational delta = to_rational(std::isinf(*gap) ? std::numeric_limits<double>::max() : *gap);
    bool from_grid = false;
    for (const auto& eps : budget_.eps_grid) {
      if (eps <= delta) {
        delta = eps;
        from_grid = true;
        break;
      }
    }
    if (!from_grid && std::isinf(*gap)) delta = budget_.eps_grid.front();
    auto w = search_gap(c, n_max + 1, delta.get_d(), delta);
    if (w) {
      v.outcome = Outcome::Diverged;
      v.gap = w;
    } else {
      v.note = "oracle confirms a persistent gap but no witness beyond n_max within the search cap";
    }
    return v;
  }

  if (scan_converged) {
    converged_by_scan();
    return v;
  }
  double floor = budget_.eps_grid.front().get_d();
  bool persistent = !sc.frontier.empty() &&
                    std::all_of(sc.frontier.begin(), sc.frontier.end(), [&](const auto& f) { return f.gap >= floor; });
  if (persistent) {
    const auto& last = sc.frontier.back();
    v.outcome = Outcome::Diverged;
    v.heuristic = true;
    v.gap = GapWitness{last.m + 1, last.argmax, last.gap, budget_.eps_grid.front()};
    v.note = "gaps >= " + to_string(budget_.eps_grid.front()) + " after every frontier tested; no oracle confirmation";
    return v;
  }
  v.note = "no stabilization with margin and no persistent gap within n_max = " + std::to_string(n_max);
  return v;
}

ConvergenceVerdict Detector::weak(const CoefficientSeq& c) const {
  if (!family_) throw ContractViolation("weak detection needs a functional family");
  ConvergenceVerdict v;
  v.predicate = Predicate::Weak;
  v.budget = budget_;
  const index_t n_max = budget_.n_max;
  const std::size_t K = functionals_.size();
  const index_t h = n_max / 2;
  const index_t split = h + (n_max - h) / 2;

  std::vector<index_t> candidates;
  {
    std::set<index_t, std::greater<>> ms;
    const auto C = static_cast<index_t>(budget_.candidate_count);
    for (index_t j = C - 1; j >= 1; --j) ms.insert(j * n_max / (C - 1));
    candidates.assign(ms.begin(), ms.end());
  }
  std::set<index_t> candidate_set(candidates.begin(), candidates.end());

  std::vector<double> P(K, 0.0);
  std::vector<std::vector<double>> snapshots;
  std::vector<index_t> snapshot_index;
  std::vector<double> lo1(K), hi1(K), lo2(K), hi2(K);
  NormAccumulator acc(series_.space());
  double sup = 0.0;
  for (index_t n = 0; n <= n_max; ++n) {
    double cn = c.value(n);
    acc.add(term(n), cn);
    sup = std::max(sup, acc.norm());
    if (cn != 0.0) {
      for (const auto& [k, p] : pairings_[static_cast<std::size_t>(n)]) {
        P[k] += cn * p;
        if (n > h && n <= split) {
          lo1[k] = std::min(lo1[k], P[k]);
          hi1[k] = std::max(hi1[k], P[k]);
        }
        if (n > split) {
          lo2[k] = std::min(lo2[k], P[k]);
          hi2[k] = std::max(hi2[k], P[k]);
        }
      }
    }
    if (n == h) lo1 = hi1 = P;
    if (n == split) {
      for (std::size_t k = 0; k < K; ++k) {
        lo1[k] = std::min(lo1[k], P[k]);
        hi1[k] = std::max(hi1[k], P[k]);
      }
      lo2 = hi2 = P;
    }
    if (candidate_set.count(n)) {
      snapshots.push_back(P);
      snapshot_index.push_back(n);
    }
  }
  v.observed_sup = sup;
  auto candidate_values = [&](index_t m) -> const std::vector<double>* {
    for (std::size_t i = 0; i < snapshot_index.size(); ++i) {
      if (snapshot_index[i] == m) return &snapshots[i];
    }
    return nullptr;
  };

  std::vector<WeakMatch> matches;
  for (const auto& eps_q : budget_.eps_grid) {
    double eps = eps_q.get_d();
    auto fits = [&](const std::vector<double>* X) {
      for (std::size_t k = 0; k < K; ++k) {
        double x = X ? (*X)[k] : 0.0;
        double lo = std::min(lo1[k], lo2[k]), hi = std::max(hi1[k], hi2[k]);
        if (!(hi - x < eps && x - lo < eps)) return false;
      }
      return true;
    };
    if (fits(nullptr)) {
      matches.push_back({eps_q, -1, h, true, std::nullopt});
      continue;
    }
    for (index_t m : candidates) {
      if (fits(candidate_values(m))) {
        matches.push_back({eps_q, m, h, true, std::nullopt});
        break;
      }
    }
  }
  bool all_matched = matches.size() == budget_.eps_grid.size();

  std::optional<Obstruction> obstruction;
  for (const auto& eps_q : budget_.eps_grid) {
    double eps = eps_q.get_d();
    for (std::size_t k = 0; k < K && !obstruction; ++k) {
      double s1 = hi1[k] - lo1[k], s2 = hi2[k] - lo2[k];
      if (s1 > 2 * eps && s2 > 2 * eps) obstruction = Obstruction{k, eps_q, h, split, s1, s2};
    }
    if (obstruction) break;
  }

  auto limit_of = [&](const WeakMatch& m) {
    return m.candidate < 0 ? FloatVector(series_.space()) : sum_range(series_.space(), terms_, c, 0, m.candidate);
  };

  std::optional<OracleAnswer> answer = ask(Predicate::Weak, c);
  if (answer) v.oracle_reason = answer->reason;

  if (answer && answer->truth == Truth::Converges) {
    std::vector<WeakMatch> full;
    for (const auto& eps_q : budget_.eps_grid) {
      auto it = std::find_if(matches.begin(), matches.end(), [&](const WeakMatch& m) { return m.eps == eps_q; });
      if (it != matches.end()) {
        full.push_back(*it);
        continue;
      }
      std::optional<mpz_class> n0;
      if (series_.oracle()) n0 = series_.oracle()->tail_index(c, eps_q.get_d());
      if (!n0) {
        v.note = "oracle confirms weak convergence; no candidate matched at eps = " + to_string(eps_q) +
                 " and no tail bound is available";
        v.matches = matches;
        return v;
      }
      full.push_back({eps_q, n_max, h, false, n0});
    }
    v.outcome = Outcome::Converged;
    v.matches = std::move(full);
    v.limit = limit_of(v.matches.back());
    return v;
  }

  if (answer && answer->truth == Truth::Diverges && family_->norming()) {
    v.outcome = Outcome::Diverged;
    v.obstruction = obstruction;
    v.matches = matches;
    v.note = all_matched ? "pairings against the first " + std::to_string(K) +
                               " functionals settle; divergence is witnessed outside the scanned functionals"
                         : "no candidate limit matches every scanned functional at the finest tolerances";
    return v;
  }

  if (all_matched) {
    v.outcome = Outcome::Converged;
    v.matches = std::move(matches);
    v.limit = limit_of(v.matches.back());
    return v;
  }
  if (obstruction) {
    v.outcome = Outcome::Diverged;
    v.heuristic = true;
    v.obstruction = obstruction;
    v.matches = matches;
    v.note = "pairing oscillation in both halves of the window; no oracle confirmation";
    return v;
  }
  v.matches = std::move(matches);
  v.note = "no candidate matched every tolerance and no obstruction found";
  return v;
}

ConvergenceVerdict Detector::bounded(const CoefficientSeq& c) const {
  ConvergenceVerdict v;
  v.predicate = Predicate::Bounded;
  v.budget = budget_;
  const index_t n_max = budget_.n_max;
  Scan sc = scan(c);
  v.observed_sup = sc.observed_sup;
  const double threshold = budget_.blowup_threshold;

  auto first_blowup = [&]() -> std::optional<GapWitness> {
    for (index_t n = 0; n <= n_max; ++n) {
      double x = sc.norms[static_cast<std::size_t>(n)];
      if (x >= threshold) return GapWitness{0, n, x, to_rational(threshold)};
    }
    return std::nullopt;
  };

  auto answer = ask(Predicate::Bounded, c);
  if (answer) v.oracle_reason = answer->reason;
  if (answer && answer->truth == Truth::Converges) {
    auto bound = series_.oracle()->partial_sum_bound(c);
    if (bound && sc.observed_sup > *bound * (1 + kRelTol) + 1e-12) {
      v.note = "observed partial-sum norm exceeds the oracle bound";
      return v;
    }
    v.outcome = Outcome::Converged;
    v.bound = bound;
    return v;
  }
  if (answer && answer->truth == Truth::Diverges) {
    auto w = first_blowup();
    if (!w) {
      NormAccumulator acc(series_.space());
      for (index_t n = 0; n <= n_max; ++n) acc.add(term(n), c.value(n));
      const index_t cap = budget_.witness_factor * (n_max + 1);
      for (index_t n = n_max + 1; n <= cap && !w; ++n) {
        double cn = c.value(n);
        if (cn == 0.0) continue;
        acc.add(series_.term(n), cn);
        if (double x = acc.norm(); x >= threshold) w = GapWitness{0, n, x, to_rational(threshold)};
      }
    }
    if (w) {
      v.outcome = Outcome::Diverged;
      v.gap = w;
    } else {
      v.note = "oracle confirms unbounded partial sums; blow-up threshold not reached within the search cap";
    }
    return v;
  }
  if (auto w = first_blowup()) {
    v.outcome = Outcome::Diverged;
    v.heuristic = true;
    v.gap = w;
    v.note = "partial-sum norm exceeds the blow-up threshold; no oracle confirmation";
    return v;
  }
  bool stabilized = true;
  for (const auto& eps : budget_.eps_grid) stabilized = stabilized && sc.stabilization(eps.get_d()) <= n_max / 2;
  if (stabilized) {
    v.outcome = Outcome::Converged;
    v.note = "Cauchy scan stabilized; observed supremum reported";
    return v;
  }
  v.note = "observed supremum below the blow-up threshold; no oracle confirmation";
  return v;
}

ConvergenceVerdict detect_strong(const FormalSeries& s, const CoefficientSeq& c, const Budget& b) {
  return Detector(s, b).strong(c);
}

ConvergenceVerdict detect_weak(const FormalSeries& s, const CoefficientSeq& c, const FunctionalFamily& fam,
                               const Budget& b) {
  return Detector(s, b, fam).weak(c);
}

ConvergenceVerdict detect_bounded(const FormalSeries& s, const CoefficientSeq& c, const Budget& b) {
  return Detector(s, b).bounded(c);
}

// ---------------------------------------------------------------------------
// Independent re-checker: plain vectors, norm() and pair() only.

namespace {

std::vector<index_t> checkpoints(index_t lo, index_t hi) {
  std::vector<index_t> out;
  if (lo > hi) return out;
  if (hi - lo <= 512) {
    for (index_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  for (index_t j = 0; j <= 128; ++j) out.push_back(lo + (hi - lo) * j / 128);
  return out;
}

/// Sigma_N for every N in `at` (sorted), by direct vector addition.
std::vector<FloatVector> partial_sums_at(const FormalSeries& s, const CoefficientSeq& c,
                                         const std::vector<index_t>& at) {
  std::vector<FloatVector> out;
  FloatVector sum(s.space());
  index_t n = 0;
  for (index_t target : at) {
    for (; n <= target; ++n) sum.add_scaled(s.term(n), c.value(n));
    out.push_back(sum);
  }
  return out;
}

RecheckResult fail(std::string why) { return {false, std::move(why)}; }

}  // namespace

RecheckResult recheck(const FormalSeries& s, const CoefficientSeq& c, const ConvergenceVerdict& v,
                      const FunctionalFamily* fam) {
  const index_t n_max = v.budget.n_max;
  if (v.outcome == Outcome::Undecided) return {true, "undecided verdicts carry no certificate"};

  auto check_gap = [&](const GapWitness& g) -> RecheckResult {
    FloatVector block(s.space());
    for (index_t n = g.m; n <= g.n; ++n) block.add_scaled(s.term(n), c.value(n));
    double x = norm(block);
    if (x < g.delta.get_d() * (1 - kRelTol)) {
      return fail("gap witness norm " + std::to_string(x) + " below delta " + to_string(g.delta));
    }
    return {true, "gap witness verified"};
  };

  switch (v.predicate) {
    case Predicate::Strong: {
      if (v.outcome == Outcome::Diverged) {
        if (!v.gap) return fail("divergence without a gap witness");
        if (!v.heuristic && !v.oracle_reason) return fail("non-heuristic divergence without oracle confirmation");
        return check_gap(*v.gap);
      }
      if (!v.limit) return fail("convergence without a limit");
      std::vector<index_t> at = checkpoints(0, n_max);
      for (const auto& st : v.stabilization) {
        if (!st.beyond_budget) {
          auto more = checkpoints(st.n0.get_si(), n_max);
          at.insert(at.end(), more.begin(), more.end());
          at.push_back(st.n0.get_si());
        }
      }
      std::sort(at.begin(), at.end());
      at.erase(std::unique(at.begin(), at.end()), at.end());
      auto sums = partial_sums_at(s, c, at);
      const FloatVector& last = sums.back();
      double scale = 1.0 + norm(last);
      if (norm(last - *v.limit) > kRelTol * scale) return fail("limit differs from the partial sum at n_max");
      auto sum_at = [&](index_t n) -> const FloatVector& {
        return sums[static_cast<std::size_t>(std::lower_bound(at.begin(), at.end(), n) - at.begin())];
      };
      for (const auto& st : v.stabilization) {
        if (st.beyond_budget) continue;
        double eps = st.eps.get_d();
        for (index_t n : checkpoints(st.n0.get_si(), n_max)) {
          double dist = st.source == "scan" ? 2 * norm(last - sum_at(n)) : norm(sum_at(n) - sum_at(st.n0.get_si()));
          if (dist > eps * (1 + kRelTol) + 1e-12) {
            return fail("stabilization at eps = " + to_string(st.eps) + " violated at N = " + std::to_string(n));
          }
        }
      }
      return {true, "limit and stabilization indices verified"};
    }
    case Predicate::Weak: {
      if (!fam) return fail("weak certificates need the functional family");
      std::size_t K = fam->first(v.budget.k_functionals).size();
      auto functionals = fam->first(K);
      if (v.outcome == Outcome::Diverged) {
        if (!v.obstruction) {
          return v.oracle_reason ? RecheckResult{true, "oracle-confirmed divergence"}
                                 : fail("divergence without obstruction or oracle");
        }
        const auto& ob = *v.obstruction;
        const auto& L = functionals.at(ob.functional);
        double value = 0.0, lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
        for (index_t n = 0; n <= n_max; ++n) {
          value += c.value(n) * pair(L, s.term(n));
          if (n == ob.begin) lo1 = hi1 = value;
          if (n > ob.begin && n <= ob.split) lo1 = std::min(lo1, value), hi1 = std::max(hi1, value);
          if (n == ob.split) lo2 = hi2 = value;
          if (n > ob.split) lo2 = std::min(lo2, value), hi2 = std::max(hi2, value);
        }
        double eps2 = 2 * ob.eps.get_d();
        if (!(hi1 - lo1 > eps2 && hi2 - lo2 > eps2)) return fail("obstruction spreads not reproduced");
        return {true, "obstruction verified"};
      }
      if (!v.limit) return fail("weak convergence without a limit");
      std::vector<std::vector<double>> values(K, std::vector<double>(static_cast<std::size_t>(n_max) + 1));
      std::vector<double> running(K, 0.0);
      for (index_t n = 0; n <= n_max; ++n) {
        FloatVector x = s.term(n);
        double cn = c.value(n);
        for (std::size_t k = 0; k < K; ++k) {
          if (cn != 0.0 && !x.is_zero()) running[k] += cn * pair(functionals[k], x);
          values[k][static_cast<std::size_t>(n)] = running[k];
        }
      }
      for (const auto& m : v.matches) {
        if (!m.verified_within_budget) {
          if (!m.n0_from_tail_bound || !v.oracle_reason) return fail("unverified match without tail bound");
          continue;
        }
        for (std::size_t k = 0; k < K; ++k) {
          double x = m.candidate < 0 ? 0.0 : values[k][static_cast<std::size_t>(m.candidate)];
          for (index_t n = m.window_begin; n <= n_max; ++n) {
            if (!(std::abs(values[k][static_cast<std::size_t>(n)] - x) < m.eps.get_d())) {
              return fail("functional " + std::to_string(k) + " leaves the eps = " + to_string(m.eps) +
                          " band at N = " + std::to_string(n));
            }
          }
        }
      }
      const auto& finest = v.matches.back();
      if (finest.verified_within_budget) {
        FloatVector expect = finest.candidate < 0 ? FloatVector(s.space())
                                                  : partial_sums_at(s, c, {finest.candidate}).front();
        if (norm(expect - *v.limit) > kRelTol * (1 + norm(expect))) return fail("limit is not the matched candidate");
      }
      return {true, "pairing bands verified"};
    }
    case Predicate::Bounded: {
      if (v.outcome == Outcome::Diverged) {
        if (!v.gap) return fail("unbounded verdict without witness");
        return check_gap(*v.gap);
      }
      auto at = checkpoints(0, n_max);
      auto sums = partial_sums_at(s, c, at);
      double top = 0.0;
      for (const auto& x : sums) top = std::max(top, norm(x));
      if (v.bound && top > *v.bound * (1 + kRelTol) + 1e-12) return fail("partial sum exceeds the certified bound");
      return {true, "partial-sum norms within bound"};
    }
    case Predicate::Unconditional: break;
  }
  return fail("unsupported predicate");
}

}  // namespace subseries

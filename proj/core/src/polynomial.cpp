#include "polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subseries/errors.hpp"

namespace subseries::poly {
namespace {

constexpr index_t kMaxExactDegree = 512;

void trim(Dense& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

bool is_zero_poly(const Dense& p) { return p.empty(); }

Dense derivative(const Dense& p) {
  Dense d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

Dense scale(Dense p, const Rational& s) {
  for (auto& c : p) c *= s;
  trim(p);
  return p;
}

Dense sub(const Dense& a, const Dense& b) {
  Dense out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

/// Polynomial long division; returns {quotient, remainder}.
std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
  if (is_zero_poly(b)) throw ContractViolation("polynomial division by zero");
  Dense q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational factor = a.back() / lead;
    q[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

Dense monic(Dense p) {
  if (p.empty()) return p;
  Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

Dense gcd(Dense a, Dense b) {
  while (!is_zero_poly(b)) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(std::move(a));
}

Dense exact_div(const Dense& a, const Dense& b) { return divmod(a, b).first; }

int sign_at(const Dense& p, const Rational& t) { return sgn(eval(p, t)); }

/// Removes roots at t = 0 and t = 1.
Dense deflate_endpoints(Dense p) {
  while (!p.empty() && sgn(p.front()) == 0) p.erase(p.begin());
  const Dense t_minus_one{Rational(-1), Rational(1)};
  while (!p.empty() && p.size() > 1 && sign_at(p, Rational(1)) == 0) p = exact_div(p, t_minus_one);
  return p;
}

std::size_t sign_variations(const std::vector<Dense>& chain, const Rational& t) {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    int s = sign_at(p, t);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Product of the odd-multiplicity square-free factors of p (Yun).
Dense odd_multiplicity_part(const Dense& p) {
  Dense result{Rational(1)};
  if (p.size() <= 1) return result;
  Dense dp = derivative(p);
  Dense b = gcd(p, dp);
  Dense c = exact_div(p, b);
  Dense d = sub(exact_div(dp, b), derivative(c));
  std::size_t i = 1;
  while (c.size() > 1) {
    Dense a = gcd(c, d);
    if (i % 2 == 1) {
      Dense prod(result.size() + a.size() - 1, Rational(0));
      for (std::size_t x = 0; x < result.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y) prod[x + y] += result[x] * a[y];
      trim(prod);
      result = std::move(prod);
    }
    c = exact_div(c, a);
    d = sub(exact_div(d, a), derivative(c));
    ++i;
  }
  return result;
}

/// True when q > 0 somewhere on [0,1].
bool positive_somewhere(const Dense& q) {
  if (q.empty()) return false;
  if (sign_at(q, Rational(0)) > 0 || sign_at(q, Rational(1)) > 0) return true;
  if (sign_at(q, Rational(0)) == 0) {
    auto first = std::find_if(q.begin(), q.end(), [](const Rational& c) { return sgn(c) != 0; });
    if (sgn(*first) > 0) return true;
  }
  if (sign_at(q, Rational(1)) == 0) {
    // Taylor expansion at 1: the first nonzero derivative decides the sign
    // just to the left of 1.
    Dense d = q;
    for (int m = 0; !d.empty(); ++m) {
      int s = sign_at(d, Rational(1));
      if (s != 0) {
        if ((m % 2 == 0 ? s : -s) > 0) return true;
        break;
      }
      d = derivative(d);
    }
  }
  return distinct_roots_in_unit_interval(odd_multiplicity_part(q)) > 0;
}

/// True when q >= 0 somewhere on [0,1].
bool nonnegative_somewhere(const Dense& q) {
  if (q.empty()) return true;
  if (sign_at(q, Rational(0)) >= 0 || sign_at(q, Rational(1)) >= 0) return true;
  return distinct_roots_in_unit_interval(q) > 0;
}

index_t degree_of(const Entries<Rational>& p) { return p.empty() ? 0 : p.back().first; }

}  // namespace

Dense to_dense(const Entries<Rational>& sparse) {
  if (sparse.empty()) return {};
  if (sparse.front().first < 0) throw ContractViolation("negative exponent in MonomialLinf vector");
  if (degree_of(sparse) > kMaxExactDegree) {
    throw BudgetError("exact MonomialLinf comparison limited to degree " + std::to_string(kMaxExactDegree));
  }
  Dense d(static_cast<std::size_t>(sparse.back().first) + 1, Rational(0));
  for (const auto& [k, c] : sparse) d[static_cast<std::size_t>(k)] = c;
  trim(d);
  return d;
}

double eval(const Entries<double>& p, double t) {
  // Entries are sorted by exponent; consecutive exponents (the common case
  // for partial sums) cost one multiply each.
  double s = 0.0;
  double power = 1.0;
  index_t at = 0;
  for (const auto& [k, c] : p) {
    if (k != at) {
      power = t == 0.0 ? 0.0 : (k == at + 1 ? power * t : power * std::pow(t, static_cast<double>(k - at)));
      at = k;
      if (power == 0.0) break;  // exponents increase and t <= 1: every later power underflows too
    }
    s += c * power;
  }
  return s;
}

Rational eval(const Dense& p, const Rational& t) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::size_t distinct_roots_in_unit_interval(const Dense& input) {
  Dense p = deflate_endpoints(input);
  if (p.size() <= 1) return 0;
  std::vector<Dense> chain{p, derivative(p)};
  while (chain.back().size() > 0) {
    auto r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.empty()) break;
    chain.push_back(scale(std::move(r), Rational(-1)));
  }
  std::size_t v0 = sign_variations(chain, Rational(0));
  std::size_t v1 = sign_variations(chain, Rational(1));
  return v0 >= v1 ? v0 - v1 : 0;
}

namespace {

double sup_two_terms(const Entries<double>& p) {
  const auto [j, a] = p[0];
  const auto [k, b] = p[1];
  auto value = [&](double t) { return std::abs(eval(p, t)); };
  double best = std::max(value(0.0), value(1.0));
  // Critical point of a t^j + b t^k in (0,1): t^(k-j) = -a j / (b k).
  double ratio = -a * static_cast<double>(j) / (b * static_cast<double>(k));
  if (ratio > 0.0 && ratio < 1.0) {
    double t = std::pow(ratio, 1.0 / static_cast<double>(k - j));
    best = std::max(best, value(t));
  }
  return best;
}

double golden_refine(const Entries<double>& p, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return std::abs(eval(p, t)); };
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

double sup_abs(const Entries<double>& p) {
  if (p.empty()) return 0.0;
  if (p.size() == 1) return std::abs(p[0].second);
  if (p.size() == 2) return sup_two_terms(p);
  const auto& grid = monomial_scan_grid();
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = std::abs(eval(p, grid[i]));
  double best = *std::max_element(values.begin(), values.end());
  // Refine around the largest local maxima of the scan.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (values[i] >= values[i - 1] && values[i] >= values[i + 1]) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > 4) peaks.resize(4);
  for (std::size_t i : peaks) best = std::max(best, golden_refine(p, grid[i - 1], grid[i + 1]));
  return best;
}

int compare_sup(const Entries<Rational>& p, const Rational& r) {
  if (sgn(r) < 0) throw ContractViolation("compare_norm needs r >= 0");
  if (p.empty()) return sgn(r) == 0 ? 0 : -1;
  if (p.size() == 1) return cmp(abs(p[0].second), r);

  // Floating filter: a grid lower bound and a Lipschitz upper bound decide
  // most queries without exact root counting.
  {
    Entries<double> pf;
    double lipschitz = 0.0;
    for (const auto& [k, c] : p) {
      pf.emplace_back(k, c.get_d());
      lipschitz += std::abs(c.get_d()) * static_cast<double>(k);
    }
    const auto& grid = monomial_scan_grid();
    double lower = 0.0, gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      lower = std::max(lower, std::abs(eval(pf, grid[i])));
      if (i > 0) gap = std::max(gap, grid[i] - grid[i - 1]);
    }
    double upper = lower + 0.5 * lipschitz * gap;
    double rd = r.get_d();
    double slack = 1e-9 * (1.0 + rd + lower);
    if (lower > rd + slack) return 1;
    if (upper < rd - slack) return -1;
  }

  Dense d = to_dense(p);
  Dense rr{r};
  Dense above = sub(d, rr);                                     // p - r
  Dense below = sub(scale(d, Rational(-1)), rr);                // -p - r
  bool gt = positive_somewhere(above) || positive_somewhere(below);
  if (gt) return 1;
  bool ge = nonnegative_somewhere(above) || nonnegative_somewhere(below);
  return ge ? 0 : -1;
}

double integral_monomial(double a, double b, index_t k) {
  double e = static_cast<double>(k + 1);
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

Rational integral_monomial(const Rational& a, const Rational& b, index_t k) {
  auto e = static_cast<unsigned long>(k + 1);
  return (subseries::pow(b, e) - subseries::pow(a, e)) / Rational(static_cast<long>(e));
}

}  // namespace subseries::poly

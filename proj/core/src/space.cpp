#include "subseries/space.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "polynomial.hpp"

namespace subseries {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ContractViolation("cannot convert a non-finite double to a rational");
  Rational q(x);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ContractViolation("empty rational literal");
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      if (sgn(q.get_den()) == 0) throw ContractViolation("zero denominator in '" + s + "'");
      q.canonicalize();
      return q;
    }
    // Decimal literal with optional exponent.
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (; pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'); ++pos) {
      if (s[pos] == '.') {
        if (seen_point) throw ContractViolation("malformed rational literal '" + s + "'");
        seen_point = true;
      } else {
        digits.push_back(s[pos]);
        if (seen_point) ++scale;
      }
    }
    if (digits.empty()) throw ContractViolation("malformed rational literal '" + s + "'");
    if (pos < s.size()) {
      if (s[pos] != 'e' && s[pos] != 'E') throw ContractViolation("malformed rational literal '" + s + "'");
      scale -= std::stol(s.substr(pos + 1));
    }
    mpz_class num(digits, 10);
    if (negative) num = -num;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    Rational q = scale >= 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ContractViolation("malformed rational literal '" + s + "'");
  }
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& q, unsigned long k) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::SeqL1: return "SeqL1";
    case SpaceKind::SeqL2: return "SeqL2";
    case SpaceKind::SeqC0: return "SeqC0";
    case SpaceKind::FiniteDim: return "FiniteDim";
    case SpaceKind::MonomialLinf: return "MonomialLinf";
    case SpaceKind::TorusTrig: return "TorusTrig";
  }
  return "?";
}

std::string to_string(Precision precision) {
  return precision == Precision::Float64 ? "float64" : "exact-rational";
}

Space Space::seq_l1(Precision precision) { return {SpaceKind::SeqL1, precision, 0, 1.0}; }
Space Space::seq_l2(Precision precision) { return {SpaceKind::SeqL2, precision, 0, 2.0}; }
Space Space::seq_c0(Precision precision) {
  return {SpaceKind::SeqC0, precision, 0, std::numeric_limits<double>::infinity()};
}
Space Space::finite_dim(index_t dimension, double p, Precision precision) {
  if (dimension < 1) throw ContractViolation("FiniteDim needs dimension >= 1");
  if (!(p >= 1.0)) throw ContractViolation("FiniteDim needs p >= 1");
  return {SpaceKind::FiniteDim, precision, dimension, p};
}
Space Space::monomial_linf(Precision precision) {
  return {SpaceKind::MonomialLinf, precision, 0, std::numeric_limits<double>::infinity()};
}
Space Space::torus_trig(Precision precision) { return {SpaceKind::TorusTrig, precision, 0, 2.0}; }

Space Space::with_precision(Precision precision) const {
  Space s = *this;
  s.precision_ = precision;
  return s;
}

double Space::norm_exponent() const { return p_; }

bool Space::admits_index(index_t i) const {
  switch (kind_) {
    case SpaceKind::FiniteDim: return i >= 0 && i < dimension_;
    case SpaceKind::TorusTrig: return true;
    default: return i >= 0;
  }
}

std::string Space::name() const {
  if (kind_ != SpaceKind::FiniteDim) return to_string(kind_);
  std::ostringstream os;
  os << "FiniteDim(" << dimension_ << ",";
  if (std::isinf(p_)) {
    os << "inf";
  } else {
    os << p_;
  }
  os << ")";
  return os.str();
}

namespace detail {

void check_same_space(const Space& a, const Space& b, const char* op) {
  if (!(a == b)) {
    throw ContractViolation(std::string(op) + ": space mismatch (" + a.name() + "/" + to_string(a.precision()) +
                            " vs " + b.name() + "/" + to_string(b.precision()) + ")");
  }
}

void check_precision(const Space& space, Precision expected) {
  if (space.precision() != expected) {
    throw ContractViolation("space " + space.name() + " is declared " + to_string(space.precision()) +
                            " but the scalar type is " + to_string(expected));
  }
}

void check_indices(const Space& space, index_t first, index_t last) {
  if (!space.admits_index(first) || !space.admits_index(last)) {
    throw ContractViolation("index out of range for " + space.name());
  }
}

}  // namespace detail

ExactVector to_exact(const FloatVector& v) {
  Entries<Rational> e;
  e.reserve(v.support_size());
  for (const auto& [i, x] : v.entries()) e.emplace_back(i, to_rational(x));
  return ExactVector(v.space().with_precision(Precision::ExactRational), std::move(e));
}

FloatVector to_float(const ExactVector& v) {
  Entries<double> e;
  e.reserve(v.support_size());
  for (const auto& [i, x] : v.entries()) e.emplace_back(i, x.get_d());
  return FloatVector(v.space().with_precision(Precision::Float64), std::move(e));
}

namespace {

double p_norm(const Entries<double>& e, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& [i, x] : e) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& [i, x] : e) s += std::abs(x);
    return s;
  }
  if (p == 2.0) {
    double scale = 0.0, ssq = 1.0;
    for (const auto& [i, x] : e) {
      double a = std::abs(x);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
    return scale * std::sqrt(ssq);
  }
  double m = p_norm(e, std::numeric_limits<double>::infinity());
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& [i, x] : e) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace

double norm(const FloatVector& v) {
  if (v.space().kind() == SpaceKind::MonomialLinf) return poly::sup_abs(v.entries());
  return p_norm(v.entries(), v.space().norm_exponent());
}

double norm(const ExactVector& v) {
  if (v.space().kind() == SpaceKind::MonomialLinf) {
    Entries<double> e;
    for (const auto& [i, x] : v.entries()) e.emplace_back(i, x.get_d());
    return poly::sup_abs(e);
  }
  return norm(to_float(v));
}

unsigned norm_power_exponent(const Space& space) {
  double p = space.norm_exponent();
  if (std::isinf(p)) return 1;
  if (p != std::floor(p) || p > 64) {
    throw ContractViolation("exact norms need an integer or infinite exponent, got p = " + std::to_string(p));
  }
  return static_cast<unsigned>(p);
}

Rational norm_power(const ExactVector& v) {
  const Space& space = v.space();
  if (space.kind() == SpaceKind::MonomialLinf) {
    throw ContractViolation("MonomialLinf sup norms are irrational in general; use compare_norm");
  }
  double p = space.norm_exponent();
  Rational acc(0);
  if (std::isinf(p)) {
    for (const auto& [i, x] : v.entries()) {
      Rational a = abs(x);
      if (a > acc) acc = a;
    }
    return acc;
  }
  unsigned q = norm_power_exponent(space);
  for (const auto& [i, x] : v.entries()) acc += pow(abs(x), q);
  return acc;
}

int compare_norm(const ExactVector& v, const Rational& r) {
  if (sgn(r) < 0) throw ContractViolation("compare_norm needs r >= 0");
  if (v.space().kind() == SpaceKind::MonomialLinf) return poly::compare_sup(v.entries(), r);
  unsigned q = norm_power_exponent(v.space());
  return cmp(norm_power(v), pow(r, q));
}

const MonomialScanConfig& monomial_scan_config() {
  static const MonomialScanConfig config{};
  return config;
}

const std::vector<double>& monomial_scan_grid() {
  static const std::vector<double> grid = [] {
    const auto& cfg = monomial_scan_config();
    std::vector<double> g;
    for (std::size_t i = 0; i < cfg.uniform_points; ++i) {
      g.push_back(static_cast<double>(i) / static_cast<double>(cfg.uniform_points - 1));
    }
    // 1 - t log-spaced from 1/2 down to boundary_depth.
    const double lo = std::log(cfg.boundary_depth);
    const double hi = std::log(0.5);
    for (std::size_t i = 0; i < cfg.boundary_points; ++i) {
      double s = hi + (lo - hi) * static_cast<double>(i) / static_cast<double>(cfg.boundary_points - 1);
      g.push_back(1.0 - std::exp(s));
    }
    g.push_back(0.0);
    g.push_back(1.0);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  }();
  return grid;
}

namespace {

template <Scalar S>
S pair_sparse(const Entries<S>& a, const Entries<S>& b) {
  S acc(0);
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      acc += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return acc;
}

template <Scalar S>
S pair_monomial(const Functional<S>& f, const Entries<S>& v) {
  S acc(0);
  if (f.interval()) {
    const auto& [a, b] = *f.interval();
    for (const auto& [k, c] : v) acc += c * poly::integral_monomial(a, b, k);
    return acc;
  }
  for (const auto& [j, g] : f.coeffs()) {
    for (const auto& [k, c] : v) acc += g * c / S(static_cast<double>(j + k + 1));
  }
  return acc;
}

template <Scalar S>
S pair_impl(const Functional<S>& f, const Vector<S>& v) {
  detail::check_same_space(f.space(), v.space(), "pair");
  if (v.space().kind() == SpaceKind::MonomialLinf) return pair_monomial(f, v.entries());
  return pair_sparse(f.coeffs(), v.entries());
}

}  // namespace

double pair(const FloatFunctional& f, const FloatVector& v) { return pair_impl(f, v); }

Rational pair(const ExactFunctional& f, const ExactVector& v) { return pair_impl(f, v); }

double operator_norm(const FloatFunctional& f) {
  const Space& space = f.space();
  switch (space.kind()) {
    case SpaceKind::SeqL1: return p_norm(f.coeffs(), std::numeric_limits<double>::infinity());
    case SpaceKind::SeqL2:
    case SpaceKind::TorusTrig: return p_norm(f.coeffs(), 2.0);
    case SpaceKind::SeqC0: return p_norm(f.coeffs(), 1.0);
    case SpaceKind::FiniteDim: {
      double p = space.norm_exponent();
      double q = std::isinf(p) ? 1.0 : (p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0));
      return p_norm(f.coeffs(), q);
    }
    case SpaceKind::MonomialLinf: {
      if (f.interval()) return f.interval()->second - f.interval()->first;
      bool nonnegative = std::all_of(f.coeffs().begin(), f.coeffs().end(), [](const auto& e) { return e.second >= 0; });
      if (nonnegative) {
        double s = 0.0;
        for (const auto& [j, g] : f.coeffs()) s += g / static_cast<double>(j + 1);
        return s;
      }
      // Composite Simpson on |g|.
      constexpr int kPanels = 4096;
      double h = 1.0 / kPanels, s = 0.0;
      for (int i = 0; i <= kPanels; ++i) {
        double w = (i == 0 || i == kPanels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * std::abs(poly::eval(f.coeffs(), i * h));
      }
      return s * h / 3.0;
    }
  }
  return 0.0;
}

double density_sup(const FloatFunctional& f) {
  if (f.space().kind() != SpaceKind::MonomialLinf) throw ContractViolation("density_sup is defined for MonomialLinf");
  if (f.interval()) return f.interval()->second > f.interval()->first ? 1.0 : 0.0;
  return poly::sup_abs(f.coeffs());
}

}  // namespace subseries

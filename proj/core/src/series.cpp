#include <limits>
#include "subseries/series.hpp"

#include <algorithm>
#include <sstream>

namespace subseries {

std::string to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::Signs: return "signs";
    case CoefficientKind::Selectors: return "selectors";
    case CoefficientKind::Scalars: return "scalars";
  }
  return "?";
}

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::Strong: return "strong";
    case Predicate::Weak: return "weak";
    case Predicate::Bounded: return "bounded";
    case Predicate::Unconditional: return "unconditional";
  }
  return "?";
}

std::string to_string(Truth t) { return t == Truth::Converges ? "converges" : "diverges"; }

// ---------------------------------------------------------------------------
// BlockSet

BlockSet BlockSet::parse(const std::string& text) {
  if (text == "all") return all();
  if (text == "none" || text.empty()) return none();
  if (text == "even") return even();
  if (text == "odd") return odd();
  std::set<index_t> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      long long id = std::stoll(item, &used);
      if (used != item.size() || id < 0) throw std::invalid_argument(item);
      ids.insert(id);
    } catch (const std::exception&) {
      throw ContractViolation("bad block id set '" + text + "'");
    }
  }
  return finite(std::move(ids));
}

bool BlockSet::contains(index_t id) const {
  switch (kind_) {
    case Kind::All: return true;
    case Kind::None: return false;
    case Kind::Even: return id % 2 == 0;
    case Kind::Odd: return id % 2 != 0;
    case Kind::Finite: return ids_.count(id) > 0;
  }
  return false;
}

BlockSet BlockSet::intersect(const BlockSet& other) const {
  if (kind_ == Kind::All) return other;
  if (other.kind_ == Kind::All) return *this;
  if (kind_ == Kind::None || other.kind_ == Kind::None) return none();
  if (kind_ == Kind::Finite || other.kind_ == Kind::Finite) {
    const BlockSet& fin = kind_ == Kind::Finite ? *this : other;
    const BlockSet& rest = kind_ == Kind::Finite ? other : *this;
    std::set<index_t> ids;
    for (index_t id : fin.ids_) {
      if (rest.contains(id)) ids.insert(id);
    }
    return finite(std::move(ids));
  }
  return kind_ == other.kind_ ? *this : none();
}

std::string BlockSet::to_string() const {
  switch (kind_) {
    case Kind::All: return "all";
    case Kind::None: return "none";
    case Kind::Even: return "even";
    case Kind::Odd: return "odd";
    case Kind::Finite: {
      std::string out;
      for (index_t id : ids_) out += (out.empty() ? "" : ",") + std::to_string(id);
      return out.empty() ? "none" : out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// BlockPartition

BlockPartition::BlockPartition(std::vector<std::vector<index_t>> blocks, std::optional<Rational> delta)
    : blocks_(std::move(blocks)), delta_(std::move(delta)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto& block = blocks_[b];
    if (block.empty()) throw ContractViolation("blocks must be nonempty");
    std::sort(block.begin(), block.end());
    for (index_t n : block) {
      if (n < 0) throw ContractViolation("block indices must be nonnegative");
      owner_.emplace_back(n, static_cast<index_t>(b));
    }
  }
  std::sort(owner_.begin(), owner_.end());
  for (std::size_t i = 1; i < owner_.size(); ++i) {
    if (owner_[i].first == owner_[i - 1].first) {
      throw ContractViolation("blocks must be pairwise disjoint (index " + std::to_string(owner_[i].first) + ")");
    }
  }
  claimed_.reserve(owner_.size());
  for (const auto& [n, b] : owner_) claimed_.push_back(n);
}

index_t BlockPartition::f(index_t n) const {
  if (n < 0) throw ContractViolation("negative series index");
  auto it = std::lower_bound(claimed_.begin(), claimed_.end(), n);
  if (it != claimed_.end() && *it == n) return owner_[static_cast<std::size_t>(it - claimed_.begin())].second;
  auto below = static_cast<index_t>(it - claimed_.begin());
  return static_cast<index_t>(blocks_.size()) + n - below;
}

std::vector<index_t> BlockPartition::fiber(index_t id) const {
  if (id < 0) throw ContractViolation("negative block id");
  auto B = static_cast<index_t>(blocks_.size());
  if (id < B) return blocks_[static_cast<std::size_t>(id)];
  index_t n = id - B;
  for (index_t c : claimed_) {
    if (c <= n) {
      ++n;
    } else {
      break;
    }
  }
  return {n};
}

// ---------------------------------------------------------------------------
// CoefficientSeq

namespace {

void check_value(CoefficientKind kind, const Rational& v) {
  if (kind == CoefficientKind::Signs && abs(v) != 1) throw ContractViolation("sign value must be +1 or -1");
  if (kind == CoefficientKind::Selectors && v != 0 && v != 1) throw ContractViolation("selector value must be 0 or 1");
}

bool same_partition(const std::shared_ptr<const BlockPartition>& a, const std::shared_ptr<const BlockPartition>& b) {
  auto blocks = [](const std::shared_ptr<const BlockPartition>& p) {
    return p ? p->blocks() : std::vector<std::vector<index_t>>{};
  };
  return a == b || blocks(a) == blocks(b);
}

}  // namespace

CoefficientSeq::CoefficientSeq(CoefficientKind kind, ExactFn exact, FloatFn value, CoefficientLaw law,
                               Rational sup_abs)
    : kind_(kind), exact_(std::move(exact)), value_(std::move(value)), law_(std::move(law)),
      sup_abs_(std::move(sup_abs)) {}

CoefficientSeq CoefficientSeq::constant(CoefficientKind kind, const Rational& value,
                                        std::optional<index_t> support_end) {
  if (kind == CoefficientKind::Signs && support_end) throw ContractViolation("sign sequences cannot vanish");
  check_value(kind, value);
  double d = value.get_d();
  CoefficientLaw law;
  law.constant = value;
  law.support_end = support_end;
  auto end = support_end.value_or(-1);
  return CoefficientSeq(
      kind, [value, end](index_t n) { return end < 0 || n < end ? value : Rational(0); },
      [d, end](index_t n) { return end < 0 || n < end ? d : 0.0; }, std::move(law), abs(value));
}

CoefficientSeq CoefficientSeq::from_list(CoefficientKind kind, std::vector<Rational> values,
                                         std::optional<Rational> tail) {
  Rational t = tail.value_or(kind == CoefficientKind::Signs ? Rational(1) : Rational(0));
  check_value(kind, t);
  Rational sup = abs(t);
  for (const auto& v : values) {
    check_value(kind, v);
    sup = std::max(sup, Rational(abs(v)));
  }
  CoefficientLaw law;
  if (t == 0) law.support_end = static_cast<index_t>(values.size());
  if (std::all_of(values.begin(), values.end(), [&](const Rational& v) { return v == t; }) && t != 0) {
    law.constant = t;
  }
  std::vector<double> floats;
  floats.reserve(values.size());
  for (const auto& v : values) floats.push_back(v.get_d());
  auto shared = std::make_shared<const std::vector<Rational>>(std::move(values));
  double td = t.get_d();
  return CoefficientSeq(
      kind,
      [shared, t](index_t n) {
        return n >= 0 && static_cast<std::size_t>(n) < shared->size() ? (*shared)[static_cast<std::size_t>(n)] : t;
      },
      [floats = std::move(floats), td](index_t n) {
        return n >= 0 && static_cast<std::size_t>(n) < floats.size() ? floats[static_cast<std::size_t>(n)] : td;
      },
      std::move(law), sup);
}

std::vector<Rational> CoefficientSeq::prefix(index_t n) const {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(std::max<index_t>(n, 0)));
  for (index_t i = 0; i < n; ++i) {
    out.push_back(exact(i));
    check_value(kind_, out.back());
  }
  return out;
}

CoefficientProfile profile(const CoefficientSeq& c) {
  const CoefficientLaw& law = c.law();
  CoefficientProfile p;
  p.opaque = law.opaque;
  if (law.opaque) return p;
  p.random = law.draw != CoefficientLaw::Draw::Deterministic && law.scale != 0;
  p.offset = law.offset;
  p.scale = law.scale;
  p.constant = p.random ? std::nullopt : law.constant;
  if (law.draw != CoefficientLaw::Draw::Deterministic && law.scale == 0) p.constant = law.offset;
  bool zero_value = p.constant && *p.constant == 0;
  p.finite_support = law.support_end.has_value() || !law.mask.is_infinite() || zero_value;
  p.full = !law.support_end && law.mask.kind() == BlockSet::Kind::All;
  return p;
}

std::optional<index_t> last_nonzero_bound(const CoefficientSeq& c) {
  const CoefficientLaw& law = c.law();
  CoefficientProfile p = profile(c);
  if (p.opaque || !p.finite_support) return std::nullopt;
  if (p.constant && *p.constant == 0) return -1;
  std::optional<index_t> bound;
  if (law.support_end) bound = *law.support_end - 1;
  if (law.mask.kind() == BlockSet::Kind::None) return -1;
  if (law.mask.kind() == BlockSet::Kind::Finite) {
    const BlockPartition trivial;
    const BlockPartition& part = law.partition ? *law.partition : trivial;
    index_t last = -1;
    for (index_t id : law.mask.ids()) {
      auto fib = part.fiber(id);
      last = std::max(last, *std::max_element(fib.begin(), fib.end()));
    }
    bound = bound ? std::min(*bound, last) : last;
  }
  return bound;
}

std::optional<Rational> min_nonzero_magnitude(const CoefficientSeq& c) {
  CoefficientProfile p = profile(c);
  if (p.opaque) return std::nullopt;
  if (!p.random) {
    if (p.constant && *p.constant != 0) return Rational(abs(*p.constant));
    return std::nullopt;
  }
  std::optional<Rational> best;
  for (const Rational& v : {Rational(p.offset + p.scale), Rational(p.offset - p.scale)}) {
    if (v == 0) continue;
    Rational m = abs(v);
    if (!best || m < *best) best = m;
  }
  return best;
}

CoefficientSeq affine(const CoefficientSeq& y, CoefficientKind kind, const Rational& scale, const Rational& offset) {
  CoefficientLaw law = y.law();
  bool restricted = law.support_end || law.mask.kind() != BlockSet::Kind::All;
  if (restricted && offset != 0) {
    law.opaque = true;
  } else if (law.draw == CoefficientLaw::Draw::Deterministic) {
    if (law.constant) law.constant = *law.constant * scale + offset;
  } else {
    law.offset = law.offset * scale + offset;
    law.scale = law.scale * scale;
  }
  Rational sup = abs(scale) * y.sup_abs() + abs(offset);
  double sd = scale.get_d(), od = offset.get_d();
  auto ye = y;
  auto yf = y;
  CoefficientSeq out(
      kind, [ye, scale, offset](index_t n) { return Rational(ye.exact(n) * scale + offset); },
      [yf, sd, od](index_t n) { return yf.value(n) * sd + od; }, std::move(law), sup);
  if (kind == CoefficientKind::Selectors) {
    // Selectors have |c| <= 1 whatever the affine bound says.
    return CoefficientSeq(out.kind(), [out](index_t n) { return out.exact(n); },
                          [out](index_t n) { return out.value(n); }, out.law(), std::min(sup, Rational(1)));
  }
  return out;
}

SelectorPair sigma_from_s(const CoefficientSeq& eps) {
  Rational half(1, 2);
  return {affine(eps, CoefficientKind::Selectors, half, half), affine(eps, CoefficientKind::Selectors, -half, half)};
}

SignPair s_from_sigma(const CoefficientSeq& chi) {
  return {CoefficientSeq::constant(CoefficientKind::Signs, Rational(1)),
          affine(chi, CoefficientKind::Signs, Rational(2), Rational(-1))};
}

CoefficientSeq coarse_coefficients(const CoefficientSeq& block_coeffs, std::shared_ptr<const BlockPartition> part) {
  if (!part) part = std::make_shared<const BlockPartition>();
  CoefficientLaw law = block_coeffs.law();
  if (law.draw == CoefficientLaw::Draw::Haar && !law.partition && law.mask.kind() == BlockSet::Kind::All &&
      !law.support_end) {
    law.draw = CoefficientLaw::Draw::Coarse;
    law.partition = part;
  } else if (law.draw == CoefficientLaw::Draw::Deterministic && law.constant && !law.support_end &&
             law.mask.kind() == BlockSet::Kind::All) {
    // constant stays constant
  } else {
    law.opaque = true;
  }
  return CoefficientSeq(
      block_coeffs.kind(), [block_coeffs, part](index_t n) { return block_coeffs.exact(part->f(n)); },
      [block_coeffs, part](index_t n) { return block_coeffs.value(part->f(n)); }, std::move(law),
      block_coeffs.sup_abs());
}

CoefficientSeq mask_coefficients(const CoefficientSeq& c, std::shared_ptr<const BlockPartition> part,
                                 const BlockSet& T) {
  if (!part) part = std::make_shared<const BlockPartition>();
  CoefficientLaw law = c.law();
  bool partition_free = law.draw != CoefficientLaw::Draw::Coarse && law.mask.kind() == BlockSet::Kind::All;
  if (partition_free || same_partition(law.partition, part)) {
    law.partition = part;
    law.mask = law.mask.intersect(T);
  } else {
    law.opaque = true;
  }
  CoefficientKind kind = c.kind() == CoefficientKind::Signs ? CoefficientKind::Scalars : c.kind();
  return CoefficientSeq(
      kind, [c, part, T](index_t n) { return T.contains(part->f(n)) ? c.exact(n) : Rational(0); },
      [c, part, T](index_t n) { return T.contains(part->f(n)) ? c.value(n) : 0.0; }, std::move(law), c.sup_abs());
}

// ---------------------------------------------------------------------------
// FormalSeries

FormalSeries::FormalSeries(Space space, TermFn term, std::string name, std::shared_ptr<const SeriesOracle> oracle,
                           std::optional<index_t> max_index_hint, ExactTermFn exact_term)
    : space_(space.with_precision(Precision::Float64)), term_(std::move(term)), exact_term_(std::move(exact_term)),
      name_(std::move(name)), oracle_(std::move(oracle)), max_index_hint_(max_index_hint) {}

FloatVector FormalSeries::term(index_t n) const {
  if (n < 0) throw ContractViolation("negative series index");
  if (max_index_hint_ && n > *max_index_hint_) return FloatVector(space_);
  FloatVector v = term_(n);
  detail::check_same_space(space_, v.space(), "FormalSeries::term");
  return v;
}

ExactVector FormalSeries::exact_term(index_t n) const {
  if (n < 0) throw ContractViolation("negative series index");
  Space exact = space_.with_precision(Precision::ExactRational);
  if (max_index_hint_ && n > *max_index_hint_) return ExactVector(exact);
  ExactVector v = exact_term_ ? exact_term_(n) : to_exact(term_(n));
  detail::check_same_space(exact, v.space(), "FormalSeries::exact_term");
  return v;
}

std::vector<FloatVector> FormalSeries::terms(index_t n) const {
  std::vector<FloatVector> out;
  for (index_t i = 0; i < n; ++i) out.push_back(term(i));
  return out;
}

std::vector<ExactVector> FormalSeries::exact_terms(index_t n) const {
  std::vector<ExactVector> out;
  for (index_t i = 0; i < n; ++i) out.push_back(exact_term(i));
  return out;
}

namespace {

class ZeroOracle final : public SeriesOracle {
 public:
  OracleAnswer decide(Predicate p, const CoefficientSeq&) const override {
    return {Truth::Converges, "every term is zero (" + to_string(p) + ")"};
  }
  std::optional<double> tail_bound(const CoefficientSeq&, index_t) const override { return 0.0; }
  std::optional<double> partial_sum_bound(const CoefficientSeq&) const override { return 0.0; }
  std::string describe() const override { return "zero series"; }
};

class MaskedOracle final : public SeriesOracle {
 public:
  MaskedOracle(std::shared_ptr<const SeriesOracle> inner, std::shared_ptr<const BlockPartition> part, BlockSet T)
      : inner_(std::move(inner)), part_(std::move(part)), T_(std::move(T)) {}

  OracleAnswer decide(Predicate p, const CoefficientSeq& c) const override {
    if (p == Predicate::Unconditional) {
      // A restriction of an unconditionally summable series is unconditionally
      // summable; nothing is claimed in the other direction.
      if (!T_.is_infinite()) return {Truth::Converges, "finitely many surviving terms"};
      auto inner = inner_->decide(p, c);
      if (inner.truth == Truth::Converges) return inner;
      throw OracleIncomplete("unconditional summability of a restriction");
    }
    return inner_->decide(p, masked(c));
  }
  std::optional<double> tail_bound(const CoefficientSeq& c, index_t M) const override {
    return inner_->tail_bound(masked(c), M);
  }
  std::optional<double> persistent_gap(const CoefficientSeq& c) const override {
    return inner_->persistent_gap(masked(c));
  }
  std::optional<double> partial_sum_bound(const CoefficientSeq& c) const override {
    return inner_->partial_sum_bound(masked(c));
  }
  std::string describe() const override { return inner_->describe() + ", restricted to block ids " + T_.to_string(); }

 private:
  CoefficientSeq masked(const CoefficientSeq& c) const { return mask_coefficients(c, part_, T_); }

  std::shared_ptr<const SeriesOracle> inner_;
  std::shared_ptr<const BlockPartition> part_;
  BlockSet T_;
};

template <typename V, typename TermOf, typename CoeffOf>
V accumulate(V sum, index_t N, TermOf term, CoeffOf coeff) {
  for (index_t n = 0; n <= N; ++n) {
    auto c = coeff(n);
    if (is_zero(c)) continue;
    sum.add_scaled(term(n), c);
  }
  return sum;
}

}  // namespace

FormalSeries zero_series(const Space& space) {
  Space s = space.with_precision(Precision::Float64);
  return FormalSeries(
      s, [s](index_t) { return FloatVector(s); }, "zero", std::make_shared<ZeroOracle>(), 0,
      [s](index_t) { return ExactVector(s.with_precision(Precision::ExactRational)); });
}

FloatVector partial_sum(const FormalSeries& s, const CoefficientSeq& c, index_t N) {
  if (N < 0) throw ContractViolation("partial_sum needs N >= 0");
  return accumulate(FloatVector(s.space()), N, [&](index_t n) { return s.term(n); },
                    [&](index_t n) { return c.value(n); });
}

ExactVector exact_partial_sum(const FormalSeries& s, const CoefficientSeq& c, index_t N) {
  if (N < 0) throw ContractViolation("partial_sum needs N >= 0");
  return accumulate(ExactVector(s.space().with_precision(Precision::ExactRational)), N,
                    [&](index_t n) { return s.exact_term(n); }, [&](index_t n) { return c.exact(n); });
}

FormalSeries restrict(const FormalSeries& s, std::shared_ptr<const BlockPartition> part, const BlockSet& T) {
  if (!part) part = std::make_shared<const BlockPartition>();
  Space space = s.space();
  std::shared_ptr<const SeriesOracle> oracle;
  if (s.oracle()) oracle = std::make_shared<MaskedOracle>(s.oracle(), part, T);
  return FormalSeries(
      space, [s, part, T, space](index_t n) { return T.contains(part->f(n)) ? s.term(n) : FloatVector(space); },
      s.name() + "|T=" + T.to_string(), std::move(oracle), s.max_index_hint(),
      [s, part, T, space](index_t n) {
        return T.contains(part->f(n)) ? s.exact_term(n) : ExactVector(space.with_precision(Precision::ExactRational));
      });
}

std::optional<mpz_class> SeriesOracle::tail_index(const CoefficientSeq& c, double eps) const {
  auto ok = [&](index_t m) {
    auto t = tail_bound(c, m);
    return t && *t <= eps;
  };
  if (!tail_bound(c, 1)) return std::nullopt;
  index_t hi = 1;
  while (!ok(hi)) {
    if (hi > (std::numeric_limits<index_t>::max() >> 2)) return std::nullopt;
    hi *= 2;
  }
  if (hi == 1) return mpz_class(0);
  index_t lo = hi / 2;  // !ok(lo)
  while (hi - lo > 1) {
    index_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return mpz_class(static_cast<long>(hi - 1));
}

}  // namespace subseries

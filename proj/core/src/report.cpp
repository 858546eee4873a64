#include "subseries/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace subseries {
namespace {

Json fraction(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

Json index_json(const mpz_class& n) {
  if (n.fits_slong_p()) return Json(n.get_si());
  return Json(n.get_str());
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    s = "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void flatten(const Json& v, const std::string& prefix, Json& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out[prefix] = v;
  }
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Seed& seed) { return {{"value", seed.value}, {"stream", seed.stream}}; }

Json to_json(const Budget& b) {
  Json grid = Json::array();
  for (const auto& e : b.eps_grid) grid.push_back(to_json(e));
  return {{"n_max", b.n_max},
          {"eps_grid", grid},
          {"k_functionals", b.k_functionals},
          {"candidate_count", b.candidate_count},
          {"blowup_threshold", b.blowup_threshold},
          {"witness_factor", b.witness_factor}};
}

Json to_json(const Params& p) {
  Json out = Json::object();
  for (const auto& [k, v] : p) out[k] = to_json(v);
  return out;
}

Json to_json(const FamilySpec& spec) {
  Json space = {{"kind", to_string(spec.space.kind())}};
  if (spec.space.kind() == SpaceKind::FiniteDim) {
    space["dimension"] = spec.space.dimension();
    space["p"] = spec.space.exponent();
  }
  return {{"name", spec.name},
          {"params", to_json(spec.params)},
          {"space", space},
          {"description", spec.description},
          {"oracle",
           {{"unconditional", spec.oracle.unconditional},
            {"strong_as", to_string(spec.oracle.strong_as)},
            {"weak_as", to_string(spec.oracle.weak_as)},
            {"bounded_as", spec.oracle.bounded_as}}}};
}

Json to_json(const BlockPartition& part) {
  Json blocks = Json::array();
  for (const auto& b : part.blocks()) blocks.push_back(b);
  Json out = {{"blocks", blocks}};
  out["delta"] = part.delta() ? to_json(*part.delta()) : Json(nullptr);
  return out;
}

Json to_json(const ConvergenceVerdict& v) {
  Json out = {{"predicate", to_string(v.predicate)},
              {"outcome", to_string(v.outcome)},
              {"heuristic", v.heuristic},
              {"observed_sup", v.observed_sup}};
  if (v.oracle_reason) out["oracle_reason"] = *v.oracle_reason;
  if (v.limit) {
    out["limit"] = {{"support", v.limit->support_size()}, {"norm", norm(*v.limit)}};
  }
  if (!v.stabilization.empty()) {
    Json st = Json::array();
    for (const auto& s : v.stabilization) {
      st.push_back({{"eps", to_json(s.eps)},
                    {"n0", index_json(s.n0)},
                    {"source", s.source},
                    {"beyond_budget", s.beyond_budget}});
    }
    out["stabilization"] = st;
  }
  if (!v.matches.empty()) {
    Json ms = Json::array();
    for (const auto& m : v.matches) {
      Json j = {{"eps", to_json(m.eps)},
                {"candidate", m.candidate},
                {"window_begin", m.window_begin},
                {"verified_within_budget", m.verified_within_budget}};
      if (m.n0_from_tail_bound) j["n0_from_tail_bound"] = index_json(*m.n0_from_tail_bound);
      ms.push_back(j);
    }
    out["matches"] = ms;
  }
  if (v.bound) out["bound"] = *v.bound;
  if (v.gap) {
    out["gap"] = {{"m", v.gap->m}, {"n", v.gap->n}, {"norm", v.gap->norm}, {"delta", to_json(v.gap->delta)}};
  }
  if (v.obstruction) {
    const auto& o = *v.obstruction;
    out["obstruction"] = {{"functional", o.functional},   {"eps", to_json(o.eps)},
                          {"begin", o.begin},             {"split", o.split},
                          {"spread_first", o.spread_first}, {"spread_second", o.spread_second}};
  }
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

Json to_json(const LevyReport& r) {
  return {{"length", r.length}, {"R", to_json(r.R)}, {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)},
          {"holds", r.holds}};
}

Json to_json(const EquidistributionReport& r) {
  return {{"N", r.N}, {"M", r.M}, {"patterns", r.patterns}, {"multiset_equal", r.multiset_equal}};
}

Json to_json(const DichotomyReport& r) {
  return {{"series", r.series},
          {"samples", r.samples},
          {"strong", {{"converged", r.strong_converged}, {"diverged", r.strong_diverged}, {"undecided", r.strong_undecided}}},
          {"weak", {{"converged", r.weak_converged}, {"diverged", r.weak_diverged}, {"undecided", r.weak_undecided}}},
          {"disagreements", r.disagreements},
          {"frac_strong", fraction(r.frac_strong)},
          {"frac_weak", fraction(r.frac_weak)},
          {"frac_undecided", r.frac_undecided},
          {"inconclusive", r.inconclusive},
          {"pass", r.dichotomy_pass}};
}

Json to_json(const OpReport& r) {
  return {{"series", r.series},
          {"samples", r.samples},
          {"blocks", r.blocks},
          {"delta", to_json(r.delta)},
          {"T", r.T},
          {"sigma", {{"failed", r.sigma_failed}, {"converged", r.sigma_converged}, {"undecided", r.sigma_undecided}}},
          {"s", {{"failed", r.s_failed}, {"converged", r.s_converged}, {"undecided", r.s_undecided}}},
          {"sigma_s_agreement", r.sigma_s_agreement},
          {"both_decided", r.both_decided},
          {"frac_sigma_fail_weak", fraction(r.frac_sigma_fail_weak)},
          {"frac_s_fail_weak", fraction(r.frac_s_fail_weak)},
          {"pass", r.pass}};
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Json envelope(const std::string& command, Json config, Json result, bool pass) {
  return {{"schema", kReportSchema},
          {"command", command},
          {"timestamp", utc_timestamp()},
          {"config", std::move(config)},
          {"result", std::move(result)},
          {"pass", pass}};
}

Json strip_timestamp(Json report) {
  report.erase("timestamp");
  return report;
}

std::string to_csv(const Json& report) {
  std::vector<Json> rows;
  const Json& result = report.contains("result") ? report["result"] : report;
  if (result.contains("rows") && result["rows"].is_array()) {
    for (const auto& row : result["rows"]) {
      Json flat = Json::object();
      flatten(row, "", flat);
      rows.push_back(flat);
    }
  } else {
    Json flat = Json::object();
    for (const auto& [k, v] : result.items()) {
      if (!v.is_array()) flatten(v, k, flat);
    }
    flat["pass"] = report.value("pass", false);
    rows.push_back(flat);
  }
  std::vector<std::string> header;
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.items()) {
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << (row.contains(header[i]) ? csv_cell(row[header[i]]) : "");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace subseries

#pragma once

/**
 * @file report.hpp
 * @brief JSON and CSV serialization of experiment results.
 *
 * JSON is canonical. Every report is an envelope
 *
 *   {"schema": 1, "command": ..., "timestamp": ..., "config": {...},
 *    "result": {...}, "pass": bool}
 *
 * where config is the full effective configuration (seed included), so two
 * runs with the same config differ only in "timestamp". Exact rationals are
 * written as strings ("3/8"), NaN fractions as null.
 *
 * CSV is a flat projection: one row per element of result["rows"], or a
 * single row of the scalar fields of result.
 */

#include <nlohmann/json.hpp>

#include "subseries/catalog.hpp"
#include "subseries/ito_nisio.hpp"
#include "subseries/orlicz_pettis.hpp"

namespace subseries {

inline constexpr int kReportSchema = 1;

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const Seed& seed);
Json to_json(const Budget& b);
Json to_json(const Params& p);
Json to_json(const FamilySpec& spec);
Json to_json(const BlockPartition& part);
Json to_json(const ConvergenceVerdict& v);
Json to_json(const LevyReport& r);
Json to_json(const EquidistributionReport& r);
Json to_json(const DichotomyReport& r);
Json to_json(const OpReport& r);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

Json envelope(const std::string& command, Json config, Json result, bool pass);

/// The envelope without its timestamp, for reproducibility comparisons.
Json strip_timestamp(Json report);

/// RFC 4180 CSV of a report envelope (see file comment).
std::string to_csv(const Json& report);

}  // namespace subseries

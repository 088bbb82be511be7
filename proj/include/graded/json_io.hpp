#pragma once

#include <graded/gradedness.hpp>
#include <graded/norms.hpp>
#include <graded/properties.hpp>
#include <graded/topk.hpp>
#include <graded/vec.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace graded {

using Json = nlohmann::json;

/// {"kind":"lp","p":2.0}, {"kind":"weighted_lp","p":1.0,"w":[...]},
/// {"kind":"atomic","atoms":[[...],...]}; "p":"inf" encodes the sup norm.
Json to_json(const NormSpec &n);
NormSpec norm_spec_from_json(const Json &j);

/// Index sets serialize 1-based.
Json index_set_to_json(const IndexSet &K);

Json to_json(const NormSequenceReport &rep);
Json to_json(const PropertyWitness &w);
Json to_json(const PropertyReport &r);
Json to_json(const GradednessVerdict &v);

/// Compact source strings: "lp:2", "lp:inf", "wlp:1:[1,2,3]",
/// "atomic:[[1,0],[0,1]]" or "atomic:@atoms.json" (file holds the array of
/// atom arrays). Throws std::invalid_argument on malformed input.
NormSpec parse_source(const std::string &text);

/// Inline JSON array of numbers.
Vec parse_vector(const std::string &text);

/// Vector file: JSON (an array of numbers, or an array of such arrays) when
/// the first non-space byte is '['; otherwise CSV, one comma-separated
/// vector per row, blank lines skipped.
std::vector<Vec> load_vectors(const std::string &path);

Json load_json_file(const std::string &path);

/// Structural schema check covering the subset the shipped schemas use:
/// "type" (string or array of strings), "enum", "properties", "required",
/// "additionalProperties": false, and "items". On mismatch returns false
/// and, when err is non-null, stores a dotted path with the reason.
bool matches_schema(const Json &doc, const Json &schema,
                    std::string *err = nullptr);

/// Full per-vector chain bundle as the CLI emits it:
/// {"x", "source", "topk", "ksupport", "stationary_from", "l0"}.
Json sequence_report_json(const NormSpec &source, const Vec &x,
                          double tol = 1e-8);

/// Recovery bundle: {"source", "x", "l0", "l0_topk", "l0_ksupport",
/// "dc" (membership for k = 0..d), "verdict" (classification of the
/// requested chain direction at this dimension)}.
Json gradedness_report_json(const NormSpec &source, const Vec &x,
                            GradedDirection direction, bool strict,
                            int trials, std::uint64_t seed,
                            double tol = 1e-8);

} // namespace graded

#pragma once

#include <string>

#include "lfun_model.hpp"
#include "powerseries.hpp"
#include "rigidity.hpp"
#include "synth.hpp"

namespace torex {

enum class ParseCode {
    MalformedSyntax,
    MissingField,
    UnsupportedVersion,
    InvalidPrime,
    InvalidGamma,
    InvalidProfile,
    InvalidMeta,
    ExponentOutOfRange,
    ValueOutOfRange,
    DuplicateCoefficient,
};

/// Structured ingest failure: names the first violated invariant and where.
class ParseError : public Error {
public:
    ParseError(ParseCode code, const std::string& location, const std::string& message)
        : Error(ErrorCode::InvalidArgument, location + ": " + message),
          parse_code_(code), location_(location) {}

    ParseCode parse_code() const { return parse_code_; }
    const std::string& location() const { return location_; }

private:
    ParseCode parse_code_;
    std::string location_;
};

const char* parse_code_name(ParseCode code);

struct LfunData {
    BivariateSeries series;
    BranchMeta meta;
};

/// Parse and fully validate a branch file; throws ParseError on the first
/// violated invariant.
LfunData parse_lfun(const std::string& bytes);

/// Canonical serialization: sorted coefficients, fixed layout; a parse
/// round-trip is the identity on canonical files.
std::string serialize_lfun(const BivariateSeries& series, const BranchMeta& meta);

/// FNV-1a 64-bit content hash, rendered "fnv1a64:<hex>".
std::string content_hash(const std::string& bytes);

/// Deterministic verdict report (schema: input_hash, verdict, reports with
/// per-entry valuations as num/den strings). Byte-identical across runs on
/// identical input.
std::string write_report(const PipelineResult& result, const BranchMeta& meta,
                         const std::string& input_hash);

/// Oracle scan report, same conventions.
std::string write_oracle_report(const std::vector<ToroidalFactor>& factors,
                                const std::string& input_hash, int m_max, int n_exponent,
                                const std::vector<long long>& a_grid);

PlantSpec parse_plant_spec(const std::string& bytes);
std::string serialize_plant_spec(const PlantSpec& spec);

/// Human-readable branch summary (the inspect command).
std::string render_inspect(const BivariateSeries& series, const BranchMeta& meta);

} // namespace torex

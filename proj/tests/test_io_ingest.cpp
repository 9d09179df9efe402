#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "io_ingest.hpp"
#include "json.hpp"

using namespace torex;

namespace {

const char* kMinimal = R"({
  "format_version": 1,
  "prime": 3,
  "tame_level": 5,
  "component_r": 0,
  "branch_i": 0,
  "twist_discriminant": 0,
  "gamma": "4",
  "degree_cutoff": 2,
  "precision_profile": [8, 8, 7],
  "coefficients": [
    {"w_exponent": 0, "t_exponent": 0, "value": "5"},
    {"w_exponent": 1, "t_exponent": 1, "value": "9"}
  ]
})";

std::string patched(const std::string& key, const std::string& replacement) {
    nlohmann::json j = nlohmann::json::parse(kMinimal);
    j[key] = nlohmann::json::parse(replacement);
    return j.dump();
}

ParseCode code_of(const std::string& bytes) {
    try {
        parse_lfun(bytes);
    } catch (const ParseError& e) {
        return e.parse_code();
    }
    FAIL("expected a parse error");
    return ParseCode::MalformedSyntax;
}

} // namespace

TEST_CASE("minimal file round-trips through canonical form") {
    LfunData d = parse_lfun(kMinimal);
    CHECK(d.series.coeff(0, 0).residue() == 5);
    CHECK(d.series.coeff(1, 1).residue() == 9);
    CHECK(d.meta.tame_level == 5);

    std::string canonical = serialize_lfun(d.series, d.meta);
    LfunData again = parse_lfun(canonical);
    CHECK(serialize_lfun(again.series, again.meta) == canonical);
    CHECK(series_agree(d.series, again.series));
}

TEST_CASE("serialization is canonical regardless of input order") {
    std::string reordered = R"({
      "coefficients": [
        {"w_exponent": 1, "t_exponent": 1, "value": "9"},
        {"w_exponent": 0, "t_exponent": 0, "value": "5"}
      ],
      "gamma": "4",
      "degree_cutoff": 2,
      "precision_profile": [8, 8, 7],
      "format_version": 1,
      "prime": 3,
      "tame_level": 5,
      "component_r": 0,
      "branch_i": 0,
      "twist_discriminant": 0
    })";
    LfunData a = parse_lfun(kMinimal);
    LfunData b = parse_lfun(reordered);
    CHECK(serialize_lfun(a.series, a.meta) == serialize_lfun(b.series, b.meta));
}

TEST_CASE("each invariant violation carries its own code") {
    CHECK(code_of("{ not json") == ParseCode::MalformedSyntax);
    CHECK(code_of("[1,2]") == ParseCode::MalformedSyntax);
    CHECK(code_of(patched("format_version", "2")) == ParseCode::UnsupportedVersion);
    CHECK(code_of(patched("prime", "2")) == ParseCode::InvalidPrime);
    CHECK(code_of(patched("prime", "9")) == ParseCode::InvalidPrime);
    CHECK(code_of(patched("gamma", "\"10\"")) == ParseCode::InvalidGamma); // 1 mod 9
    CHECK(code_of(patched("gamma", "\"5\"")) == ParseCode::InvalidGamma);  // 2 mod 3
    CHECK(code_of(patched("precision_profile", "[8, 9, 7]")) == ParseCode::InvalidProfile);
    CHECK(code_of(patched("precision_profile", "[8, 0, 0]")) == ParseCode::InvalidProfile);
    CHECK(code_of(patched("precision_profile", "[8, 8]")) == ParseCode::InvalidProfile);
    CHECK(code_of(patched("coefficients",
                          R"([{"w_exponent": 2, "t_exponent": 1, "value": "1"}])")) ==
          ParseCode::ExponentOutOfRange);
    CHECK(code_of(patched("coefficients",
                          R"([{"w_exponent": 1, "t_exponent": 1, "value": "2187"}])")) ==
          ParseCode::ValueOutOfRange);
    CHECK(code_of(patched("coefficients",
                          R"([{"w_exponent": 0, "t_exponent": 0, "value": "1"},
                              {"w_exponent": 0, "t_exponent": 0, "value": "2"}])")) ==
          ParseCode::DuplicateCoefficient);
    CHECK(code_of(patched("twist_discriminant", "15")) == ParseCode::InvalidMeta);
    CHECK(code_of(patched("component_r", "5")) == ParseCode::InvalidMeta);

    nlohmann::json missing = nlohmann::json::parse(kMinimal);
    missing.erase("gamma");
    CHECK(code_of(missing.dump()) == ParseCode::MissingField);
    CHECK(std::string(parse_code_name(ParseCode::ValueOutOfRange)) == "value_out_of_range");
}

TEST_CASE("value-out-of-range error names the offending pair") {
    try {
        parse_lfun(patched("coefficients",
                           R"([{"w_exponent": 1, "t_exponent": 1, "value": "2187"}])"));
        FAIL("expected throw");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
    }
}

TEST_CASE("content hash is stable") {
    CHECK(content_hash("abc") == "fnv1a64:e71fa2190541574b");
    CHECK(content_hash("") == "fnv1a64:cbf29ce484222325");
}

TEST_CASE("reports are deterministic and carry the audit") {
    LfunData d = parse_lfun(kMinimal);
    PipelineResult r1 = branch_pipeline(d.series, d.meta, 2);
    PipelineResult r2 = branch_pipeline(d.series, d.meta, 2);
    std::string rep1 = write_report(r1, d.meta, content_hash(kMinimal));
    std::string rep2 = write_report(r2, d.meta, content_hash(kMinimal));
    CHECK(rep1 == rep2);

    nlohmann::json j = nlohmann::json::parse(rep1);
    CHECK(j.contains("input_hash"));
    CHECK(j.contains("verdict"));
    CHECK(j["verdict"].contains("kind"));
    CHECK(j.contains("reports"));
    for (const auto& rep : j["reports"]) {
        CHECK(rep.contains("level"));
        CHECK(rep.contains("fe_divided"));
        CHECK(rep.contains("outcome"));
        for (const auto& e : rep["entries"]) {
            CHECK(e.contains("zeta_prime_exp"));
            CHECK(e.contains("orientation"));
            CHECK(e.contains("valuation"));
            CHECK(e.contains("accuracy"));
            CHECK(e.contains("trusted"));
        }
    }
}

TEST_CASE("plant specs round-trip") {
    PlantSpec spec{42, 3, 5, 0, 0, PadicInt(3, 10, 4), 4, {10, 10, 9, 9, 8},
                   ToroidalFactor(ToroidalFactor::Orientation::PowerOnW, PadicInt(3, 10, 2),
                                  PadicInt(3, 10, 1), RootOfUnity(3, 1, 1)),
                   CofactorConstraint::Unit};
    std::string bytes = serialize_plant_spec(spec);
    PlantSpec back = parse_plant_spec(bytes);
    CHECK(back.seed == 42);
    CHECK(back.factor.has_value());
    CHECK(back.factor->xi.level == 1);
    CHECK(serialize_plant_spec(back) == bytes);

    PlantSpec bare{7, 3, 5, 0, 0, PadicInt(3, 10, 4), 2, {8, 8, 8}, std::nullopt,
                   CofactorConstraint::InSquareOfMaximalIdeal};
    PlantSpec bare_back = parse_plant_spec(serialize_plant_spec(bare));
    CHECK(!bare_back.factor.has_value());
    CHECK(bare_back.cofactor_constraint == CofactorConstraint::InSquareOfMaximalIdeal);

    CHECK_THROWS_AS(parse_plant_spec("{}"), ParseError);
}

TEST_CASE("inspect rendering surfaces the branch facts") {
    LfunData d = parse_lfun(kMinimal);
    std::string text = render_inspect(d.series, d.meta);
    CHECK(text.find("prime: 3") != std::string::npos);
    CHECK(text.find("unit_branch: yes") != std::string::npos);
    CHECK(text.find("self_dual: yes") != std::string::npos);
}

TEST_CASE("inspect reports unresolved invariants on an empty window") {
    std::string empty = patched("coefficients", "[]");
    LfunData d = parse_lfun(empty);
    std::string text = render_inspect(d.series, d.meta);
    CHECK(text.find("mu(w=0): >=7") != std::string::npos); // min profile bound
    CHECK(text.find("lambda(w=0): unknown") != std::string::npos);
    CHECK(text.find("unit_branch: no") != std::string::npos);
}

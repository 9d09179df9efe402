#include "io_ingest.hpp"

#include <numeric>
#include <sstream>

#include "json.hpp"

namespace torex {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kEngineVersion = "torex/0.1.0";

[[noreturn]] void fail(ParseCode code, const std::string& location, const std::string& msg) {
    throw ParseError(code, location, msg);
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(ParseCode::MissingField, key, "required field missing");
    return *it;
}

long long int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) fail(ParseCode::MalformedSyntax, key, "expected an integer");
    return v.get<long long>();
}

std::string string_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) fail(ParseCode::MalformedSyntax, key, "expected a string");
    return v.get<std::string>();
}

std::uint64_t decimal_field(const json& j, const char* key, const std::string& location) {
    std::string s = string_field(j, key);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        fail(ParseCode::MalformedSyntax, location, "value must be a decimal digit string");
    if (s.size() > 19) fail(ParseCode::ValueOutOfRange, location, "value exceeds 63 bits");
    return std::stoull(s);
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::string valuation_value(const Valuation& v) { return v.value.str(); }

const char* valuation_kind(const Valuation& v) { return v.is_exact() ? "exact" : "at_least"; }

} // namespace

const char* parse_code_name(ParseCode code) {
    switch (code) {
        case ParseCode::MalformedSyntax: return "malformed_syntax";
        case ParseCode::MissingField: return "missing_field";
        case ParseCode::UnsupportedVersion: return "unsupported_version";
        case ParseCode::InvalidPrime: return "invalid_prime";
        case ParseCode::InvalidGamma: return "invalid_gamma";
        case ParseCode::InvalidProfile: return "invalid_profile";
        case ParseCode::InvalidMeta: return "invalid_meta";
        case ParseCode::ExponentOutOfRange: return "exponent_out_of_range";
        case ParseCode::ValueOutOfRange: return "value_out_of_range";
        case ParseCode::DuplicateCoefficient: return "duplicate_coefficient";
    }
    return "unknown";
}

LfunData parse_lfun(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        fail(ParseCode::MalformedSyntax, "file", e.what());
    }
    if (!j.is_object()) fail(ParseCode::MalformedSyntax, "file", "top level must be an object");

    if (int_field(j, "format_version") != 1)
        fail(ParseCode::UnsupportedVersion, "format_version", "only version 1 is supported");

    std::int64_t p = int_field(j, "prime");
    if (p == 2) fail(ParseCode::InvalidPrime, "prime", "p = 2 is not supported");
    if (!is_prime(p)) fail(ParseCode::InvalidPrime, "prime", "not a prime");

    long long cutoff = int_field(j, "degree_cutoff");
    if (cutoff < 0 || cutoff > 512)
        fail(ParseCode::InvalidProfile, "degree_cutoff", "cutoff out of range");

    const json& prof = field(j, "precision_profile");
    if (!prof.is_array() || static_cast<long long>(prof.size()) != cutoff + 1)
        fail(ParseCode::InvalidProfile, "precision_profile", "length must be degree_cutoff+1");
    std::vector<int> profile;
    for (std::size_t d = 0; d < prof.size(); ++d) {
        if (!prof[d].is_number_integer())
            fail(ParseCode::InvalidProfile, "precision_profile", "entries must be integers");
        long long m = prof[d].get<long long>();
        if (m < 1) fail(ParseCode::InvalidProfile, "precision_profile", "entries must be positive");
        if (d > 0 && m > profile.back())
            fail(ParseCode::InvalidProfile, "precision_profile", "profile must be non-increasing");
        if (m > max_precision(p))
            fail(ParseCode::InvalidProfile, "precision_profile",
                 "precision exceeds the 63-bit residue range");
        profile.push_back(static_cast<int>(m));
    }

    int gamma_prec = std::max(profile[0], 2);
    std::uint64_t graw = decimal_field(j, "gamma", "gamma");
    if (graw >= pow_u64_checked(p, gamma_prec))
        fail(ParseCode::InvalidGamma, "gamma", "gamma exceeds the profile modulus");
    PadicInt gamma(p, gamma_prec, graw);
    {
        std::uint64_t pp = static_cast<std::uint64_t>(p);
        if (gamma.residue() % pp != 1 || gamma.residue() % (pp * pp) == 1)
            fail(ParseCode::InvalidGamma, "gamma", "gamma must generate 1 + pZ_p");
    }

    long long tame = int_field(j, "tame_level");
    long long r = int_field(j, "component_r");
    long long i = int_field(j, "branch_i");
    long long twist = int_field(j, "twist_discriminant");
    if (tame < 1) fail(ParseCode::InvalidMeta, "tame_level", "must be positive");
    if (r < 0 || r >= p - 1) fail(ParseCode::InvalidMeta, "component_r", "must lie in [0, p-1)");
    if (i < 0 || i >= p - 1) fail(ParseCode::InvalidMeta, "branch_i", "must lie in [0, p-1)");
    if (twist != 0 && std::gcd(twist < 0 ? -twist : twist, p * tame) != 1)
        fail(ParseCode::InvalidMeta, "twist_discriminant", "must be coprime to p*N");

    const json& cf = field(j, "coefficients");
    if (!cf.is_array()) fail(ParseCode::MalformedSyntax, "coefficients", "expected an array");
    std::map<std::pair<int, int>, PadicInt> coeffs;
    for (std::size_t idx = 0; idx < cf.size(); ++idx) {
        std::string loc = "coefficients[" + std::to_string(idx) + "]";
        if (!cf[idx].is_object()) fail(ParseCode::MalformedSyntax, loc, "expected an object");
        long long a = int_field(cf[idx], "w_exponent");
        long long b = int_field(cf[idx], "t_exponent");
        if (a < 0 || b < 0 || a + b > cutoff)
            fail(ParseCode::ExponentOutOfRange, loc,
                 "exponents (" + std::to_string(a) + "," + std::to_string(b) +
                     ") outside the cutoff");
        std::uint64_t value = decimal_field(cf[idx], "value", loc);
        int d = static_cast<int>(a + b);
        if (value >= pow_u64_checked(p, profile[d]))
            fail(ParseCode::ValueOutOfRange, loc,
                 "coefficient out of range at (" + std::to_string(a) + "," + std::to_string(b) +
                     ")");
        auto key = std::make_pair(static_cast<int>(a), static_cast<int>(b));
        if (coeffs.count(key))
            fail(ParseCode::DuplicateCoefficient, loc,
                 "duplicate pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
        coeffs.emplace(key, PadicInt(p, profile[d], value));
    }

    BivariateSeries series(p, static_cast<int>(cutoff), profile, std::move(coeffs), gamma);
    BranchMeta meta(p, tame, static_cast<int>(r), static_cast<int>(i), twist, gamma);
    return {std::move(series), std::move(meta)};
}

std::string serialize_lfun(const BivariateSeries& series, const BranchMeta& meta) {
    ojson j;
    j["format_version"] = 1;
    j["prime"] = series.prime();
    j["tame_level"] = meta.tame_level;
    j["component_r"] = meta.component_r;
    j["branch_i"] = meta.branch_i;
    j["twist_discriminant"] = meta.twist_discriminant;
    j["gamma"] = std::to_string(series.gamma().residue());
    j["degree_cutoff"] = series.cutoff();
    j["precision_profile"] = series.profile();
    ojson arr = ojson::array();
    for (const auto& [key, value] : series.coeffs()) {
        ojson c;
        c["w_exponent"] = key.first;
        c["t_exponent"] = key.second;
        c["value"] = std::to_string(value.residue());
        arr.push_back(std::move(c));
    }
    j["coefficients"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) out << ((h >> shift) & 0xF);
    return out.str();
}

namespace {

ojson entry_json(const CheckEntry& e) {
    ojson out;
    out["zeta_prime_exp"] = e.zeta_prime_exp;
    out["orientation"] = orientation_name(e.orientation);
    out["valuation"] = valuation_value(e.valuation);
    out["valuation_kind"] = valuation_kind(e.valuation);
    out["accuracy"] = e.accuracy.str();
    out["trusted"] = e.trusted;
    if (e.denominator_valuation)
        out["denominator_valuation"] = valuation_value(*e.denominator_valuation);
    else
        out["denominator_valuation"] = nullptr;
    return out;
}

} // namespace

std::string write_report(const PipelineResult& result, const BranchMeta& meta,
                         const std::string& input_hash) {
    ojson j;
    j["format_version"] = 1;
    j["generator"] = kEngineVersion;
    j["rng"] = kGeneratorName;
    j["input_hash"] = input_hash;
    j["branch_i"] = meta.branch_i;
    j["self_dual"] = result.self_dual;
    j["mu"] = valuation_value(result.mu);
    j["mu_kind"] = valuation_kind(result.mu);
    if (result.lambda) j["lambda"] = *result.lambda;
    else j["lambda"] = nullptr;
    j["fe_divided"] = result.fe_divided;
    j["notes"] = result.notes;

    ojson verdict;
    verdict["kind"] = verdict_name(result.verdict.kind);
    if (result.verdict.kind == BranchVerdict::Kind::ExcludedByModP ||
        result.verdict.kind == BranchVerdict::Kind::ForcedFEThenExcluded)
        verdict["level"] = result.verdict.level;
    else
        verdict["level"] = nullptr;
    verdict["reason"] = result.verdict.reason;
    j["verdict"] = std::move(verdict);

    ojson reports = ojson::array();
    for (const auto& rep : result.audit) {
        ojson r;
        r["level"] = rep.level;
        r["fe_divided"] = rep.fe_divided;
        r["outcome"] = outcome_name(rep.outcome);
        ojson entries = ojson::array();
        for (const auto& e : rep.entries) entries.push_back(entry_json(e));
        r["entries"] = std::move(entries);
        reports.push_back(std::move(r));
    }
    j["reports"] = std::move(reports);
    return j.dump(2) + "\n";
}

std::string write_oracle_report(const std::vector<ToroidalFactor>& factors,
                                const std::string& input_hash, int m_max, int n_exponent,
                                const std::vector<long long>& a_grid) {
    ojson j;
    j["format_version"] = 1;
    j["generator"] = kEngineVersion;
    j["input_hash"] = input_hash;
    ojson grid;
    grid["m_max"] = m_max;
    grid["n_exponent"] = n_exponent;
    grid["a_grid"] = a_grid;
    j["grid"] = std::move(grid);
    ojson arr = ojson::array();
    for (const auto& f : factors) {
        ojson e;
        e["orientation"] = orientation_name(f.orientation);
        e["n"] = std::to_string(f.exponent_n.residue());
        e["a"] = std::to_string(f.exponent_a.residue());
        e["xi_level"] = f.xi.level;
        e["xi_exponent"] = f.xi.exponent;
        arr.push_back(std::move(e));
    }
    j["factors"] = std::move(arr);
    return j.dump(2) + "\n";
}

PlantSpec parse_plant_spec(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        fail(ParseCode::MalformedSyntax, "file", e.what());
    }
    if (!j.is_object()) fail(ParseCode::MalformedSyntax, "file", "top level must be an object");
    if (int_field(j, "format_version") != 1)
        fail(ParseCode::UnsupportedVersion, "format_version", "only version 1 is supported");

    std::int64_t p = int_field(j, "prime");
    if (p == 2) fail(ParseCode::InvalidPrime, "prime", "p = 2 is not supported");
    if (!is_prime(p)) fail(ParseCode::InvalidPrime, "prime", "not a prime");

    long long cutoff = int_field(j, "degree_cutoff");
    if (cutoff < 0 || cutoff > 512)
        fail(ParseCode::InvalidProfile, "degree_cutoff", "cutoff out of range");
    const json& prof = field(j, "precision_profile");
    if (!prof.is_array() || static_cast<long long>(prof.size()) != cutoff + 1)
        fail(ParseCode::InvalidProfile, "precision_profile", "length must be degree_cutoff+1");
    std::vector<int> profile;
    for (std::size_t d = 0; d < prof.size(); ++d) {
        long long m = prof[d].is_number_integer() ? prof[d].get<long long>() : -1;
        if (m < 1 || m > max_precision(p) || (d > 0 && m > profile.back()))
            fail(ParseCode::InvalidProfile, "precision_profile", "invalid profile entry");
        profile.push_back(static_cast<int>(m));
    }

    int gamma_prec = std::max(profile[0], 2);
    std::uint64_t graw = decimal_field(j, "gamma", "gamma");
    PadicInt gamma(p, gamma_prec, graw);
    {
        std::uint64_t pp = static_cast<std::uint64_t>(p);
        if (gamma.residue() % pp != 1 || gamma.residue() % (pp * pp) == 1)
            fail(ParseCode::InvalidGamma, "gamma", "gamma must generate 1 + pZ_p");
    }

    std::optional<ToroidalFactor> factor;
    const json& fj = field(j, "factor");
    if (!fj.is_null()) {
        if (!fj.is_object()) fail(ParseCode::MalformedSyntax, "factor", "expected object or null");
        std::string o = string_field(fj, "orientation");
        ToroidalFactor::Orientation orient;
        if (o == "power_on_w") orient = ToroidalFactor::Orientation::PowerOnW;
        else if (o == "power_on_t") orient = ToroidalFactor::Orientation::PowerOnT;
        else fail(ParseCode::MalformedSyntax, "factor.orientation", "unknown orientation");
        std::uint64_t n = decimal_field(fj, "n", "factor.n");
        std::uint64_t a = decimal_field(fj, "a", "factor.a");
        long long xl = int_field(fj, "xi_level");
        long long xe = int_field(fj, "xi_exponent");
        if (xl < 0 || xl > 8) fail(ParseCode::InvalidMeta, "factor.xi_level", "out of range");
        factor.emplace(orient, PadicInt(p, gamma_prec, n), PadicInt(p, gamma_prec, a),
                       RootOfUnity(p, static_cast<int>(xl), xe));
    }

    std::string cs = string_field(j, "cofactor_constraint");
    CofactorConstraint constraint;
    if (cs == "unit") constraint = CofactorConstraint::Unit;
    else if (cs == "in_maximal_ideal") constraint = CofactorConstraint::InMaximalIdeal;
    else if (cs == "in_square_of_maximal_ideal")
        constraint = CofactorConstraint::InSquareOfMaximalIdeal;
    else fail(ParseCode::MalformedSyntax, "cofactor_constraint", "unknown constraint");

    long long seed = int_field(j, "seed");
    long long tame = int_field(j, "tame_level");
    long long r = int_field(j, "component_r");
    long long i = int_field(j, "branch_i");
    if (tame < 1 || r < 0 || r >= p - 1 || i < 0 || i >= p - 1)
        fail(ParseCode::InvalidMeta, "meta", "invalid branch identity");

    return PlantSpec{static_cast<std::uint64_t>(seed), p, tame, static_cast<int>(r),
                     static_cast<int>(i), gamma, static_cast<int>(cutoff),
                     std::move(profile), factor, constraint};
}

std::string serialize_plant_spec(const PlantSpec& spec) {
    ojson j;
    j["format_version"] = 1;
    j["generator"] = kGeneratorName;
    j["seed"] = spec.seed;
    j["prime"] = spec.prime;
    j["tame_level"] = spec.tame_level;
    j["component_r"] = spec.component_r;
    j["branch_i"] = spec.branch_i;
    j["gamma"] = std::to_string(spec.gamma.residue());
    j["degree_cutoff"] = spec.cutoff;
    j["precision_profile"] = spec.profile;
    if (spec.factor) {
        ojson f;
        f["orientation"] = orientation_name(spec.factor->orientation);
        f["n"] = std::to_string(spec.factor->exponent_n.residue());
        f["a"] = std::to_string(spec.factor->exponent_a.residue());
        f["xi_level"] = spec.factor->xi.level;
        f["xi_exponent"] = spec.factor->xi.exponent;
        j["factor"] = std::move(f);
    } else {
        j["factor"] = nullptr;
    }
    switch (spec.cofactor_constraint) {
        case CofactorConstraint::Unit: j["cofactor_constraint"] = "unit"; break;
        case CofactorConstraint::InMaximalIdeal:
            j["cofactor_constraint"] = "in_maximal_ideal";
            break;
        case CofactorConstraint::InSquareOfMaximalIdeal:
            j["cofactor_constraint"] = "in_square_of_maximal_ideal";
            break;
    }
    return j.dump(2) + "\n";
}

std::string render_inspect(const BivariateSeries& series, const BranchMeta& meta) {
    std::ostringstream out;
    out << "prime: " << series.prime() << "\n";
    out << "tame_level: " << meta.tame_level << "\n";
    out << "component_r: " << meta.component_r << "\n";
    out << "branch_i: " << meta.branch_i << "\n";
    out << "twist_discriminant: " << meta.twist_discriminant << "\n";
    out << "gamma: " << series.gamma().residue() << "\n";
    out << "degree_cutoff: " << series.cutoff() << "\n";
    out << "precision_profile:";
    for (int m : series.profile()) out << " " << m;
    out << "\n";

    bool unit = series.constant_is_unit();
    out << "unit_branch: " << (unit ? "yes" : "no") << "\n";
    bool sd = self_dual_indices(meta.component_r, meta.prime).count(meta.branch_i) > 0;
    out << "self_dual: " << (sd ? "yes" : "no") << "\n";

    UnivariateSeries g = specialize(series, Axis::W, PadicInt(series.prime(),
                                                              series.profile()[0], 0));
    MuLambda ml = mu_lambda(g);
    out << "mu(w=0): " << ml.mu.str() << "\n";
    out << "lambda(w=0): ";
    if (ml.lambda) out << *ml.lambda;
    else out << "unknown";
    out << "\n";

    bool square = series.cutoff() >= 1 && series.in_ideal_square_certified();
    out << "in_ideal_square: " << (square ? "yes" : "no") << "\n";
    if (square && series.cutoff() >= 2) {
        std::uint64_t p = static_cast<std::uint64_t>(series.prime());
        out << "quadratic_mod_p: " << series.coeff(2, 0).residue() % p << " "
            << series.coeff(1, 1).residue() % p << " " << series.coeff(0, 2).residue() % p
            << "\n";
    }
    return out.str();
}

} // namespace torex

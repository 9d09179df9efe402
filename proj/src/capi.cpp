#include "torex.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "io_ingest.hpp"
#include "rigidity.hpp"
#include "synth.hpp"

using namespace torex;

struct torex_lfun {
    LfunData data;
    std::string canonical;
    std::string hash;
};

struct torex_report {
    PipelineResult result;
    std::string rendered;
};

namespace {

thread_local std::string g_last_error;

torex_status set_error(torex_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

torex_status status_from(const Error& e) {
    switch (e.code()) {
        case ErrorCode::PreconditionNotCertified:
        case ErrorCode::NonzeroRemainder:
            return TOREX_ERR_PRECONDITION;
        case ErrorCode::PrecisionExhausted:
        case ErrorCode::PrecisionOverflow:
            return TOREX_ERR_PRECISION;
        default:
            return TOREX_ERR_INVALID_ARGUMENT;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
torex_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        return set_error(TOREX_ERR_PARSE, e.what());
    } catch (const Error& e) {
        return set_error(status_from(e), e.what());
    } catch (const std::exception& e) {
        return set_error(TOREX_ERR_INTERNAL, e.what());
    }
}

} // namespace

extern "C" {

const char* torex_last_error(void) { return g_last_error.c_str(); }

const char* torex_version(void) { return "0.1.0"; }

torex_status torex_lfun_parse(const char* data, size_t size, torex_lfun** out) {
    if (!data || !out) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        std::string bytes(data, size);
        LfunData parsed = parse_lfun(bytes);
        auto* handle = new torex_lfun{std::move(parsed), "", content_hash(bytes)};
        handle->canonical = serialize_lfun(handle->data.series, handle->data.meta);
        *out = handle;
        return TOREX_OK;
    });
}

torex_status torex_lfun_read_file(const char* path, torex_lfun** out) {
    if (!path || !out) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) return set_error(TOREX_ERR_IO, std::string("cannot open ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    return torex_lfun_parse(bytes.data(), bytes.size(), out);
}

void torex_lfun_free(torex_lfun* lfun) { delete lfun; }

torex_status torex_lfun_serialize(const torex_lfun* lfun, char** out) {
    if (!lfun || !out) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    *out = dup_string(lfun->canonical);
    return TOREX_OK;
}

torex_status torex_lfun_inspect(const torex_lfun* lfun, char** out) {
    if (!lfun || !out) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = dup_string(render_inspect(lfun->data.series, lfun->data.meta));
        return TOREX_OK;
    });
}

torex_status torex_verdict(const torex_lfun* lfun, int m_max, int jobs, torex_report** out) {
    if (!lfun || !out) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    if (m_max < 1) return set_error(TOREX_ERR_INVALID_ARGUMENT, "m_max must be >= 1");
    return guarded([&]() {
        auto* report = new torex_report{
            branch_pipeline(lfun->data.series, lfun->data.meta, m_max, jobs), ""};
        report->rendered = write_report(report->result, lfun->data.meta, lfun->hash);
        *out = report;
        return TOREX_OK;
    });
}

torex_verdict_kind torex_report_kind(const torex_report* report) {
    switch (report->result.verdict.kind) {
        case BranchVerdict::Kind::UnitBranch: return TOREX_VERDICT_UNIT_BRANCH;
        case BranchVerdict::Kind::ExcludedByQuadratic:
            return TOREX_VERDICT_EXCLUDED_BY_QUADRATIC;
        case BranchVerdict::Kind::ExcludedByModP: return TOREX_VERDICT_EXCLUDED_BY_MODP;
        case BranchVerdict::Kind::ForcedFEThenExcluded:
            return TOREX_VERDICT_FORCED_FE_THEN_EXCLUDED;
        default: return TOREX_VERDICT_INCONCLUSIVE;
    }
}

int torex_report_level(const torex_report* report) {
    const auto& v = report->result.verdict;
    if (v.kind == BranchVerdict::Kind::ExcludedByModP ||
        v.kind == BranchVerdict::Kind::ForcedFEThenExcluded)
        return v.level;
    return -1;
}

int torex_report_excluded(const torex_report* report) {
    return report->result.verdict.excluded() ? 1 : 0;
}

torex_status torex_report_render(const torex_report* report, char** out_json) {
    if (!report || !out_json) return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    *out_json = dup_string(report->rendered);
    return TOREX_OK;
}

void torex_report_free(torex_report* report) { delete report; }

torex_status torex_synth(const char* spec_json, size_t size, unsigned long long seed_override,
                         int has_seed_override, char** out_lfun_json) {
    if (!spec_json || !out_lfun_json)
        return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        PlantSpec spec = parse_plant_spec(std::string(spec_json, size));
        if (has_seed_override) spec.seed = seed_override;
        BivariateSeries series = plant(spec);
        BranchMeta meta(spec.prime, spec.tame_level, spec.component_r, spec.branch_i, 0,
                        spec.gamma);
        *out_lfun_json = dup_string(serialize_lfun(series, meta));
        return TOREX_OK;
    });
}

torex_status torex_oracle(const torex_lfun* lfun, int m_max, int n_exponent,
                          const char* a_grid_csv, char** out_json) {
    if (!lfun || !a_grid_csv || !out_json)
        return set_error(TOREX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        std::vector<long long> a_grid;
        std::stringstream ss(a_grid_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            a_grid.push_back(std::stoll(item));
        }
        if (a_grid.empty()) a_grid.push_back(0);
        auto factors = oracle_scan(lfun->data.series, m_max, n_exponent, a_grid);
        *out_json = dup_string(
            write_oracle_report(factors, lfun->hash, m_max, n_exponent, a_grid));
        return TOREX_OK;
    });
}

void torex_free_string(char* s) { std::free(s); }

} // extern "C"

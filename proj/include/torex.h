/*
 * torex: toroidal-factor exclusion engine for two-variable p-adic
 * L-function data.
 *
 * C interface of the shared library: opaque handles, status codes, and
 * malloc-style ownership (every char* produced here is released with
 * torex_free_string, every handle with its matching _free).
 */
#ifndef TOREX_H
#define TOREX_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef TOREX_API
#define TOREX_API __attribute__((visibility("default")))
#endif

typedef enum torex_status {
    TOREX_OK = 0,
    TOREX_ERR_IO = 1,
    TOREX_ERR_PARSE = 2,
    TOREX_ERR_PRECONDITION = 3,
    TOREX_ERR_PRECISION = 4,
    TOREX_ERR_INVALID_ARGUMENT = 5,
    TOREX_ERR_INTERNAL = 6
} torex_status;

typedef enum torex_verdict_kind {
    TOREX_VERDICT_UNIT_BRANCH = 0,
    TOREX_VERDICT_EXCLUDED_BY_QUADRATIC = 1,
    TOREX_VERDICT_EXCLUDED_BY_MODP = 2,
    TOREX_VERDICT_FORCED_FE_THEN_EXCLUDED = 3,
    TOREX_VERDICT_INCONCLUSIVE = 4
} torex_verdict_kind;

/* A parsed branch file (series + metadata). */
typedef struct torex_lfun torex_lfun;
/* A completed exclusion run (verdict + audit trail). */
typedef struct torex_report torex_report;

/* Message for the most recent failure on this thread; empty string if none. */
TOREX_API const char* torex_last_error(void);

TOREX_API const char* torex_version(void);

TOREX_API torex_status torex_lfun_parse(const char* data, size_t size, torex_lfun** out);
TOREX_API torex_status torex_lfun_read_file(const char* path, torex_lfun** out);
TOREX_API void torex_lfun_free(torex_lfun* lfun);

/* Canonical serialization of the parsed branch. */
TOREX_API torex_status torex_lfun_serialize(const torex_lfun* lfun, char** out);

/* Human-readable summary: prime, level, branch, twist, profile, mu/lambda of
 * the weight-specialized series, unit/self-dual flags. */
TOREX_API torex_status torex_lfun_inspect(const torex_lfun* lfun, char** out);

/* Run the exclusion pipeline up to sweep level m_max with the given worker
 * count (jobs <= 1 means serial; parallel runs produce identical reports). */
TOREX_API torex_status torex_verdict(const torex_lfun* lfun, int m_max, int jobs,
                                     torex_report** out);

TOREX_API torex_verdict_kind torex_report_kind(const torex_report* report);
/* Sweep level for the mod-p verdicts, -1 otherwise. */
TOREX_API int torex_report_level(const torex_report* report);
/* 1 when the verdict certifies exclusion (anything but inconclusive). */
TOREX_API int torex_report_excluded(const torex_report* report);
TOREX_API torex_status torex_report_render(const torex_report* report, char** out_json);
TOREX_API void torex_report_free(torex_report* report);

/* Deterministic fixture generation from a plant-spec document; returns the
 * branch file bytes. seed_override replaces the spec's seed when
 * has_seed_override is nonzero. */
TOREX_API torex_status torex_synth(const char* spec_json, size_t size,
                                   unsigned long long seed_override, int has_seed_override,
                                   char** out_lfun_json);

/* Brute-force factor scan over the finite grid: xi of level <= m_max, N mod
 * p^n_exponent, A in the comma-separated integer list a_grid. */
TOREX_API torex_status torex_oracle(const torex_lfun* lfun, int m_max, int n_exponent,
                                    const char* a_grid_csv, char** out_json);

TOREX_API void torex_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TOREX_H */

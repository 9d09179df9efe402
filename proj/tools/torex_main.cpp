// Command-line front end for the torex shared library. Talks to the engine
// exclusively through the C API in torex.h.
//
// Exit codes: 0 success / exclusion certified, 1 operational error,
// 2 inconclusive verdict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "torex.h"

namespace {

int fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

int fail_api(const char* what) {
    std::cerr << "error: " << what << ": " << torex_last_error() << "\n";
    return 1;
}

bool write_output(const std::string& path, const std::string& bytes, std::string& err) {
    if (path.empty()) {
        std::cout << bytes;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err = "cannot open " + path + " for writing";
        return false;
    }
    out << bytes;
    return out.good();
}

struct LfunHandle {
    torex_lfun* ptr = nullptr;
    ~LfunHandle() { torex_lfun_free(ptr); }
};

struct ReportHandle {
    torex_report* ptr = nullptr;
    ~ReportHandle() { torex_report_free(ptr); }
};

struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { torex_free_string(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"toroidal-factor exclusion checks for two-variable p-adic L-function data"};
    app.set_version_flag("--version", std::string("torex ") + torex_version());
    app.require_subcommand(1);

    std::string input_path, out_path, spec_path, a_grid = "0";
    int m_max = 3, jobs = 1, n_exponent = 1;
    unsigned long long seed = 0;
    bool has_seed = false;

    auto* inspect = app.add_subcommand("inspect", "summarize a branch file");
    inspect->add_option("file", input_path, "branch file")->required();

    auto* verdict = app.add_subcommand("verdict", "run the exclusion pipeline");
    verdict->add_option("file", input_path, "branch file")->required();
    verdict->add_option("--m-max", m_max, "largest sweep level (default 3)");
    verdict->add_option("--jobs", jobs, "worker threads for the sweeps");
    verdict->add_option("--out", out_path, "write the report here instead of stdout");

    auto* synth = app.add_subcommand("synth", "generate a deterministic fixture");
    synth->add_option("--spec", spec_path, "plant spec file")->required();
    auto* seed_opt = synth->add_option("--seed", seed, "override the spec's seed");
    synth->add_option("--out", out_path, "write the fixture here instead of stdout");

    auto* oracle = app.add_subcommand("oracle", "brute-force factor scan over a finite grid");
    oracle->add_option("file", input_path, "branch file")->required();
    oracle->add_option("--m-max", m_max, "largest xi level (default 3)");
    oracle->add_option("--n-mod-exponent", n_exponent, "scan N modulo p^t (default t=1)");
    oracle->add_option("--a-grid", a_grid, "comma-separated A values (default 0)");
    oracle->add_option("--out", out_path, "write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    std::string err;

    if (inspect->parsed()) {
        LfunHandle lfun;
        if (torex_lfun_read_file(input_path.c_str(), &lfun.ptr) != TOREX_OK)
            return fail_api("inspect");
        StringHandle text;
        if (torex_lfun_inspect(lfun.ptr, &text.ptr) != TOREX_OK) return fail_api("inspect");
        std::cout << text.str();
        return 0;
    }

    if (verdict->parsed()) {
        LfunHandle lfun;
        if (torex_lfun_read_file(input_path.c_str(), &lfun.ptr) != TOREX_OK)
            return fail_api("verdict");
        ReportHandle report;
        if (torex_verdict(lfun.ptr, m_max, jobs, &report.ptr) != TOREX_OK)
            return fail_api("verdict");
        StringHandle rendered;
        if (torex_report_render(report.ptr, &rendered.ptr) != TOREX_OK)
            return fail_api("verdict");
        if (!write_output(out_path, rendered.str(), err)) return fail(err);
        return torex_report_excluded(report.ptr) ? 0 : 2;
    }

    if (synth->parsed()) {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) return fail("cannot open " + spec_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string bytes = buf.str();
        has_seed = seed_opt->count() > 0;
        StringHandle fixture;
        if (torex_synth(bytes.data(), bytes.size(), seed, has_seed ? 1 : 0, &fixture.ptr) !=
            TOREX_OK)
            return fail_api("synth");
        if (!write_output(out_path, fixture.str(), err)) return fail(err);
        return 0;
    }

    if (oracle->parsed()) {
        LfunHandle lfun;
        if (torex_lfun_read_file(input_path.c_str(), &lfun.ptr) != TOREX_OK)
            return fail_api("oracle");
        StringHandle rendered;
        if (torex_oracle(lfun.ptr, m_max, n_exponent, a_grid.c_str(), &rendered.ptr) !=
            TOREX_OK)
            return fail_api("oracle");
        if (!write_output(out_path, rendered.str(), err)) return fail(err);
        return 0;
    }
    return 1;
}

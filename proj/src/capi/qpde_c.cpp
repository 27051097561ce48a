#include "qpde.h"

#include <cstring>
#include <string>

#include "qpde/pipeline/pipeline.hpp"

using namespace qpde;

struct qpde_problem {
    ProblemFile pf;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename F>
int guarded(int fail_code, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        return fail(fail_code, e.what());
    } catch (const std::exception& e) {
        return fail(fail_code, e.what());
    }
}

} // namespace

extern "C" {

const char* qpde_last_error(void) { return g_last_error.c_str(); }

void qpde_string_free(char* s) { delete[] s; }

int qpde_problem_parse(const char* text, qpde_problem** out) {
    if (!text || !out) return fail(QPDE_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded(QPDE_ERR_PARSE, [&] {
        auto* p = new qpde_problem{parse_problem_file(text)};
        *out = p;
        return QPDE_OK;
    });
}

int qpde_problem_load(const char* path, qpde_problem** out) {
    if (!path || !out) return fail(QPDE_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded(QPDE_ERR_PARSE, [&] {
        auto* p = new qpde_problem{load_problem_file(path)};
        *out = p;
        return QPDE_OK;
    });
}

void qpde_problem_free(qpde_problem* p) { delete p; }

int qpde_problem_serialize(const qpde_problem* p, char** text) {
    if (!p || !text) return fail(QPDE_ERR_ARGUMENT, "null argument");
    return guarded(QPDE_ERR_RUN, [&] {
        *text = dup_string(serialize_problem_file(p->pf));
        return QPDE_OK;
    });
}

int qpde_set_mode(qpde_problem* p, const char* mode) {
    if (!p || !mode) return fail(QPDE_ERR_ARGUMENT, "null argument");
    std::string m = mode;
    if (m == "matrix")
        p->pf.run.mode = RunMode::Matrix;
    else if (m == "circuit")
        p->pf.run.mode = RunMode::Circuit;
    else
        return fail(QPDE_ERR_ARGUMENT, "mode must be 'matrix' or 'circuit'");
    return QPDE_OK;
}

int qpde_set_out_dir(qpde_problem* p, const char* dir) {
    if (!p || !dir) return fail(QPDE_ERR_ARGUMENT, "null argument");
    p->pf.run.out = dir;
    return QPDE_OK;
}

int qpde_set_times(qpde_problem* p, const double* times, int count) {
    if (!p || !times || count <= 0) return fail(QPDE_ERR_ARGUMENT, "bad time list");
    p->pf.run.times.assign(times, times + count);
    return QPDE_OK;
}

int qpde_discretize_report(qpde_problem* p, char** text) {
    if (!p || !text) return fail(QPDE_ERR_ARGUMENT, "null argument");
    return guarded(QPDE_ERR_RUN, [&] {
        *text = dup_string(discretize_report_text(p->pf));
        return QPDE_OK;
    });
}

int qpde_encode_report(qpde_problem* p, char** text) {
    if (!p || !text) return fail(QPDE_ERR_ARGUMENT, "null argument");
    return guarded(QPDE_ERR_RUN, [&] {
        *text = dup_string(encode_report_text(p->pf));
        return QPDE_OK;
    });
}

int qpde_resources_report(qpde_problem* p, char** text) {
    if (!p || !text) return fail(QPDE_ERR_ARGUMENT, "null argument");
    return guarded(QPDE_ERR_RUN, [&] {
        *text = dup_string(resources_report_text(p->pf));
        return QPDE_OK;
    });
}

int qpde_run(qpde_problem* p, char** metrics_text) {
    if (!p || !metrics_text) return fail(QPDE_ERR_ARGUMENT, "null argument");
    return guarded(QPDE_ERR_RUN, [&] {
        RunArtifacts art = run(p->pf);
        *metrics_text = dup_string(art.metrics_text);
        return QPDE_OK;
    });
}

} // extern "C"

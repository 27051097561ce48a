#ifndef QPDE_H
#define QPDE_H

#ifdef __cplusplus
extern "C" {
#endif

/* C interface to the quantum PDE solver. All functions return QPDE_OK (0) on
 * success or a nonzero error code; qpde_last_error() describes the most recent
 * failure on the calling thread. Strings returned through out-parameters are
 * heap-allocated and must be released with qpde_string_free(). */

#define QPDE_OK 0
#define QPDE_ERR_ARGUMENT 1
#define QPDE_ERR_PARSE 2
#define QPDE_ERR_RUN 3

typedef struct qpde_problem qpde_problem;

const char* qpde_last_error(void);
void qpde_string_free(char* s);

/* Problem files: line-oriented sections [domain], [term], [source],
 * [boundary], [initial], [grid], [run]; see the README for the grammar. */
int qpde_problem_parse(const char* text, qpde_problem** out);
int qpde_problem_load(const char* path, qpde_problem** out);
void qpde_problem_free(qpde_problem* p);
int qpde_problem_serialize(const qpde_problem* p, char** text);

/* Config overrides applied on top of the file's [run] section. */
int qpde_set_mode(qpde_problem* p, const char* mode); /* "matrix" | "circuit" */
int qpde_set_out_dir(qpde_problem* p, const char* dir);
int qpde_set_times(qpde_problem* p, const double* times, int count);

/* Discretization summary: grid, matrix shape, CFL step. */
int qpde_discretize_report(qpde_problem* p, char** text);

/* Block-encoding resource report for the assembled Hamiltonian. */
int qpde_encode_report(qpde_problem* p, char** text);

/* Full resource report: encodings, QSVT degrees, classical comparison. */
int qpde_resources_report(qpde_problem* p, char** text);

/* Run the pipeline. Returns the metrics text (one line per requested time:
 * fidelity, mse, success probability); artifacts are written to the output
 * directory when one is configured. */
int qpde_run(qpde_problem* p, char** metrics_text);

#ifdef __cplusplus
}
#endif

#endif

#ifndef SHDX_SHDX_H
#define SHDX_SHDX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SHDX_API __declspec(dllexport)
#else
#define SHDX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes. The run_* functions return SHDX_OK once a report exists;
   whether its checks passed is read with shdx_report_status. */
typedef enum shdx_status {
    SHDX_OK = 0,
    SHDX_CHECK_FAILED = 1,
    SHDX_INPUT_ERROR = 2,
    SHDX_NUMERICAL_ERROR = 3,
    SHDX_IO_ERROR = 4,
    SHDX_INVALID_ARGUMENT = 5,
    SHDX_INTERNAL_ERROR = 6
} shdx_status;

typedef enum shdx_format { SHDX_FORMAT_JSON = 0, SHDX_FORMAT_CSV = 1 } shdx_format;

SHDX_API const char* shdx_version(void);
/* Message of the last failing call on this thread; empty when none. */
SHDX_API const char* shdx_last_error(void);
SHDX_API const char* shdx_status_name(shdx_status status);

typedef struct shdx_options {
    double tol_zero;     /* relative zero threshold for inertia and nullity */
    double theta_probe;  /* angular probe for splitting numbers */
    int timing;          /* nonzero adds timing_ms to reports */
    unsigned threads;    /* 0 = hardware concurrency */
} shdx_options;

SHDX_API void shdx_options_init(shdx_options* options);

/* Matrices are 2m x 2m, column-major. */
SHDX_API shdx_status shdx_check_symplectic(int m, const double* matrix, double tol, int* is_symplectic);
SHDX_API shdx_status shdx_d_omega(int m, const double* matrix, double omega_angle, double* value);
SHDX_API shdx_status shdx_nullity(int m, const double* matrix, double omega_angle, double tol_zero, int* nullity);

/* Discrete coefficient sequence B_0 .. B_{N-1} with step h. */
typedef struct shdx_system shdx_system;

SHDX_API shdx_status shdx_system_create(int m, int n_steps, double h, const double* blocks, shdx_system** out);
SHDX_API shdx_status shdx_system_standard(int m, int j, int n_steps, shdx_system** out);
SHDX_API void shdx_system_free(shdx_system* system);
SHDX_API shdx_status shdx_system_dims(const shdx_system* system, int* m, int* n_steps, double* h);
SHDX_API shdx_status shdx_system_monodromy(const shdx_system* system, double* out);

/* out = {m-, m0, m+}; fails with SHDX_NUMERICAL_ERROR when m0 differs from the Floquet nullity. */
SHDX_API shdx_status shdx_morse_indices(const shdx_system* system, double omega_angle, double tol_zero, int out[3]);
SHDX_API shdx_status shdx_maslov_index(const shdx_system* system, double omega_angle, int* index, int* nullity);
SHDX_API shdx_status shdx_splitting_morse(const shdx_system* system, double omega_angle, double theta, int* plus,
                                          int* minus);
SHDX_API shdx_status shdx_splitting_maslov(const shdx_system* system, double omega_angle, double theta, int* plus,
                                           int* minus);
SHDX_API shdx_status shdx_dump_hessian(const shdx_system* system, double omega_angle, const char* path);

/* JSON system definition. */
typedef struct shdx_definition shdx_definition;

SHDX_API shdx_status shdx_definition_parse(const char* json, shdx_definition** out);
SHDX_API shdx_status shdx_definition_load(const char* path, shdx_definition** out);
/* B = 0 with the given dimensions at omega = 1. */
SHDX_API shdx_status shdx_definition_default(int m, int n_steps, shdx_definition** out);
SHDX_API void shdx_definition_free(shdx_definition* def);
SHDX_API shdx_status shdx_definition_set_m(shdx_definition* def, int m);
SHDX_API shdx_status shdx_definition_set_n(shdx_definition* def, int n_steps);
SHDX_API shdx_status shdx_definition_set_omegas(shdx_definition* def, const double* angles, size_t count);
SHDX_API shdx_status shdx_definition_dims(const shdx_definition* def, int* m, int* n_steps, double* h);
SHDX_API shdx_status shdx_definition_build(const shdx_definition* def, shdx_system** out);

/* Reports. */
typedef struct shdx_report shdx_report;

typedef struct shdx_suite_config {
    uint64_t seed;
    int trials;
    const int* ms;
    size_t ms_count;
    const int* ns;
    size_t ns_count;
    const double* omega_angles;
    size_t omega_count;
    int degenerate;
    double norm_bound;
} shdx_suite_config;

/* Defaults: seed 7, 50 trials, m in {1,2}, N in {8,16}, omega angles {0, pi, pi/3, 2}. */
SHDX_API void shdx_suite_config_init(shdx_suite_config* config);

SHDX_API shdx_status shdx_run_index(const shdx_definition* def, const shdx_options* options, shdx_report** out);
SHDX_API shdx_status shdx_run_morse(const shdx_definition* def, const shdx_options* options, const char* dump_path,
                                    shdx_report** out);
SHDX_API shdx_status shdx_run_spectrum(int m, int n_steps, double h, const double* angles, size_t count,
                                       shdx_report** out);
SHDX_API shdx_status shdx_run_splitting(const shdx_definition* def, const shdx_options* options, shdx_report** out);
SHDX_API shdx_status shdx_run_crossings(const shdx_definition* def, const shdx_options* options, shdx_report** out);
SHDX_API shdx_status shdx_run_corollaries(const shdx_definition* def, const shdx_options* options, shdx_report** out);
SHDX_API shdx_status shdx_run_theorem_suite(const shdx_suite_config* config, const shdx_options* options,
                                            shdx_report** out);
SHDX_API shdx_status shdx_run_convergence(const shdx_definition* def, int n0, int levels, const shdx_options* options,
                                          shdx_report** out);

/* SHDX_OK, SHDX_CHECK_FAILED or SHDX_NUMERICAL_ERROR. */
SHDX_API shdx_status shdx_report_status(const shdx_report* report);
SHDX_API shdx_status shdx_report_serialize(const shdx_report* report, shdx_format format, char** out);
SHDX_API shdx_status shdx_report_write(const shdx_report* report, shdx_format format, const char* path);
SHDX_API void shdx_report_free(shdx_report* report);
SHDX_API void shdx_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif

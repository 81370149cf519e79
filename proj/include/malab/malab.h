// Copyright 2026 The malab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the malab core. Every call that can fail returns a
 * malab_status; the message of the most recent failure on the calling thread
 * is available from malab_last_error(). */
#ifndef MALAB_MALAB_H
#define MALAB_MALAB_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MALAB_API __declspec(dllexport)
#else
#define MALAB_API __attribute__((visibility("default")))
#endif

typedef enum malab_status {
  MALAB_OK = 0,
  MALAB_E_INVALID_ARGUMENT = 1,
  MALAB_E_STENCIL = 2,
  MALAB_E_MALFORMED_HEADER = 3,
  MALAB_E_UNSUPPORTED_VERSION = 4,
  MALAB_E_DIMENSION_MISMATCH = 5,
  MALAB_E_TRUNCATED_PAYLOAD = 6,
  MALAB_E_IO = 7,
  MALAB_E_INADMISSIBLE = 8,
  MALAB_E_DEGENERATE_EIGENVALUE = 9,
  MALAB_E_NON_CONVEX = 10,
  MALAB_E_MAX_ITERATIONS = 11,
  MALAB_E_LINE_SEARCH = 12,
  MALAB_E_CONFIG = 13,
  MALAB_E_INTERNAL = 99
} malab_status;

/* Opaque scalar field on the space-time grid (x fastest, then y, then xi). */
typedef struct malab_field malab_field;

MALAB_API const char* malab_version(void);
MALAB_API const char* malab_last_error(void);

/* Caps worker threads; n <= 0 restores the default. */
MALAB_API void malab_set_threads(int n);

MALAB_API malab_status malab_field_create(int nx, int ny, int nt, malab_field** out);
MALAB_API malab_status malab_field_read(const char* path, malab_field** out);
MALAB_API malab_status malab_field_write(const malab_field* f, const char* path);
MALAB_API malab_status malab_field_dims(const malab_field* f, int* nx, int* ny, int* nt);
/* Pointer to nx*ny*nt values owned by the field; NULL for a NULL field. */
MALAB_API double* malab_field_data(malab_field* f);
MALAB_API void malab_field_destroy(malab_field* f);

/* Closed-form eps-geodesic between equal potentials. */
MALAB_API malab_status malab_trivial_solution(int nx, int ny, int nt, double eps,
                                              malab_field** out);

/* Largest eigenvalue of the chart Hessian over interior nodes. */
MALAB_API malab_status malab_field_max_lambda1(const malab_field* f, double* out);

/* rows: n*n row-major symmetric matrix, n in 2..4. lambdas receives n values
 * in descending order, vectors n*n with eigenvector a stored in row a. */
MALAB_API malab_status malab_eigen_decompose(int n, const double* rows, double* lambdas,
                                             double* vectors);

MALAB_API malab_status malab_h_eval(double s, double s_max, double* h, double* dh, double* d2h);

/* Commands return process exit codes (0 ok, 1 config, 2 solver, 3 verdict,
 * 4 selftest, 5 data not x-only). NULL out/config selects the default. */
MALAB_API int malab_cmd_geodesic(const char* config, const char* out);
MALAB_API int malab_cmd_oracle_compare(const char* config, const char* out);
MALAB_API int malab_cmd_solve_ma(const char* config, const char* out);
MALAB_API int malab_cmd_selftest(void);

#ifdef __cplusplus
}
#endif

#endif /* MALAB_MALAB_H */

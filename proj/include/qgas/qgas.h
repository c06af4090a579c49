/* Copyright 2026 The qgas authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the qgas shared library: a momentum-lattice simulator for
 * the propagation, friction and decoherence of a fast quantum particle in a
 * thermal gas, with three cross-validated master-equation backends
 * (simplified Redfield, Lindblad, linear Boltzmann).
 *
 * All functions return qgas_status; on failure qgas_last_error() carries the
 * message of the failing call on the same thread. Strings returned through
 * out-parameters are owned by the caller and released with
 * qgas_string_free().
 */

#ifndef QGAS_QGAS_H
#define QGAS_QGAS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qgas_status {
  QGAS_OK = 0,
  QGAS_ERROR_VALIDATION = 2, /* bad config, schema or physical inconsistency */
  QGAS_ERROR_NUMERIC = 3,    /* quadrature / integration failure */
  QGAS_ERROR_IO = 4          /* file read or write failure */
} qgas_status;

/* Opaque handle over a parsed run configuration. */
typedef struct qgas_config qgas_config;

typedef struct qgas_options {
  const char* out_dir;   /* NULL means "." */
  const char* cache_dir; /* NULL disables the rate-table cache */
  int quiet;             /* nonzero silences progress lines on stderr */
  const char* backend;   /* run only: override the configured backend */
} qgas_options;

const char* qgas_version(void);

/* Message of the last failing call on this thread ("" when none). */
const char* qgas_last_error(void);

qgas_status qgas_config_load(const char* path, qgas_config** out_config);
qgas_status qgas_config_parse(const char* json_text, qgas_config** out_config);
void qgas_config_free(qgas_config* config);

/* Full validation (regime flags, stiffness bound); report is a JSON string. */
qgas_status qgas_validate(const qgas_config* config, const qgas_options* options,
                          char** out_report);

/* Build or refresh the cached rate table; requires options->cache_dir. */
qgas_status qgas_table(const qgas_config* config, const qgas_options* options,
                       char** out_summary);

/* Run the configured backend, streaming observable CSVs and a JSON summary
 * into options->out_dir. */
qgas_status qgas_run(const qgas_config* config, const qgas_options* options,
                     char** out_summary);

/* Run all three backends from the same initial state and emit the per-time
 * population discrepancies. */
qgas_status qgas_compare(const qgas_config* config, const qgas_options* options,
                         char** out_summary);

void qgas_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QGAS_QGAS_H */

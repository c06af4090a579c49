// Copyright 2026 The qgas authors
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

#include "qgas/qgas.h"

#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "driver.hpp"
#include "error.hpp"

struct qgas_config {
  qgas::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

qgas_status failure(qgas_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, converting exceptions to status codes. std::domain_error /
// std::invalid_argument / std::out_of_range count as contract violations of
// the configuration and map to the validation code.
template <typename Fn>
qgas_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QGAS_OK;
  } catch (const qgas::ValidationError& e) {
    return failure(QGAS_ERROR_VALIDATION, e.what());
  } catch (const qgas::NumericError& e) {
    return failure(QGAS_ERROR_NUMERIC, e.what());
  } catch (const qgas::IoError& e) {
    return failure(QGAS_ERROR_IO, e.what());
  } catch (const std::domain_error& e) {
    return failure(QGAS_ERROR_VALIDATION, e.what());
  } catch (const std::invalid_argument& e) {
    return failure(QGAS_ERROR_VALIDATION, e.what());
  } catch (const std::out_of_range& e) {
    return failure(QGAS_ERROR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return failure(QGAS_ERROR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return failure(QGAS_ERROR_NUMERIC, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qgas::RunOptions to_options(const qgas_options* options) {
  qgas::RunOptions out;
  if (!options) return out;
  if (options->out_dir) out.out_dir = options->out_dir;
  if (options->cache_dir) out.cache_dir = options->cache_dir;
  out.quiet = options->quiet != 0;
  if (options->backend) out.backend_override = options->backend;
  return out;
}

using Verb = std::string (*)(const qgas::RunConfig&, const qgas::RunOptions&);

qgas_status run_verb(Verb verb, const qgas_config* config, const qgas_options* options,
                     char** out) {
  if (!config) return failure(QGAS_ERROR_VALIDATION, "null config handle");
  return guarded([&] {
    const std::string result = verb(config->config, to_options(options));
    if (out) *out = copy_string(result);
  });
}

}  // namespace

extern "C" {

const char* qgas_version(void) { return "1.0.0"; }

const char* qgas_last_error(void) { return g_last_error.c_str(); }

qgas_status qgas_config_load(const char* path, qgas_config** out_config) {
  if (!path || !out_config)
    return failure(QGAS_ERROR_VALIDATION, "qgas_config_load: null argument");
  *out_config = nullptr;
  return guarded([&] {
    auto* handle = new qgas_config{qgas::load_config(path)};
    *out_config = handle;
  });
}

qgas_status qgas_config_parse(const char* json_text, qgas_config** out_config) {
  if (!json_text || !out_config)
    return failure(QGAS_ERROR_VALIDATION, "qgas_config_parse: null argument");
  *out_config = nullptr;
  return guarded([&] {
    auto* handle = new qgas_config{qgas::parse_config_json(json_text, "inline config")};
    *out_config = handle;
  });
}

void qgas_config_free(qgas_config* config) { delete config; }

qgas_status qgas_validate(const qgas_config* config, const qgas_options* options,
                          char** out_report) {
  return run_verb(&qgas::cmd_validate, config, options, out_report);
}

qgas_status qgas_table(const qgas_config* config, const qgas_options* options,
                       char** out_summary) {
  return run_verb(&qgas::cmd_table, config, options, out_summary);
}

qgas_status qgas_run(const qgas_config* config, const qgas_options* options,
                     char** out_summary) {
  return run_verb(&qgas::cmd_run, config, options, out_summary);
}

qgas_status qgas_compare(const qgas_config* config, const qgas_options* options,
                         char** out_summary) {
  return run_verb(&qgas::cmd_compare, config, options, out_summary);
}

void qgas_string_free(char* s) { delete[] s; }

}  // extern "C"

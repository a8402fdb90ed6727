/* C interface to the stability toolkit. All strings are UTF-8 and
 * NUL-terminated. Strings returned through out-parameters are owned by the
 * caller and released with apnv_string_free. */
#ifndef APNV_H
#define APNV_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define APNV_API __declspec(dllexport)
#else
#define APNV_API __attribute__((visibility("default")))
#endif

typedef struct apnv_model apnv_model;

typedef enum apnv_status {
    APNV_OK = 0,
    APNV_ERR_PARSE = 1,
    APNV_ERR_IO = 2,
    APNV_ERR_ARGUMENT = 3,
    APNV_ERR_INTERNAL = 4
} apnv_status;

/* Parses model text. On failure *error receives a message of the form
 * "line:col: message" (may be NULL if not wanted). */
APNV_API apnv_status apnv_model_parse(const char* text, apnv_model** out, char** error);
APNV_API apnv_status apnv_model_load_file(const char* path, apnv_model** out, char** error);
APNV_API void apnv_model_free(apnv_model* model);

/* Canonical text of a parsed model. */
APNV_API apnv_status apnv_model_print(const apnv_model* model, char** text);

/* Runs a command ("check-stability", "zeros", ...) with a JSON object of
 * options. The JSON report is stored in *report. Returns the command's exit
 * code: 0 stable/valid, 1 unstable/violated, 2 usage error, 3 unknown or
 * bounds exhausted; -1 if the arguments themselves are unusable. */
APNV_API int apnv_run_command(const apnv_model* model, const char* command, const char* options_json,
                              char** report);

APNV_API void apnv_string_free(char* s);
APNV_API const char* apnv_version(void);

#ifdef __cplusplus
}
#endif

#endif

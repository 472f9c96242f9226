#ifndef GERM_H
#define GERM_H

/* C interface to the germ library. Strings returned through out-parameters
   are owned by the caller and released with germ_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GERM_API __attribute__((visibility("default")))
#else
#define GERM_API
#endif

typedef enum {
  GERM_OK = 0,
  GERM_E_SYNTAX = 1,
  GERM_E_SEMANTIC = 2,
  GERM_E_MISMATCH = 3,
  GERM_E_DOMAIN = 4,
  GERM_E_UNSUPPORTED = 5,
  GERM_E_CAP_EXCEEDED = 6,
  GERM_E_OBSTRUCTION = 7,
  GERM_E_IO = 8,
  GERM_E_INTERNAL = 99
} germ_status;

typedef struct germ_session germ_session;

GERM_API const char* germ_version(void);

/* Parses session text. On failure *out is NULL and *errmsg holds a message. */
GERM_API germ_status germ_session_parse(const char* text, germ_session** out, char** errmsg);
GERM_API void germ_session_free(germ_session* s);
/* Canonical text form of a parsed session. */
GERM_API germ_status germ_session_serialize(const germ_session* s, char** out);
/* Number of named objects in a session. */
GERM_API int germ_session_object_count(const germ_session* s);

/* Runs one CLI command; argv excludes the program name. *out receives the
   JSON report, *err diagnostics, *exit_code 0 / 1 (error) / 2 (negative). */
GERM_API germ_status germ_run(int argc, const char* const* argv, char** out, char** err, int* exit_code);

GERM_API void germ_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

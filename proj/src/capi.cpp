#include "germ/germ.h"

#include <cstdlib>
#include <cstring>

#include "germ/commands.hpp"
#include "germ/session.hpp"

struct germ_session {
  germ::Session s;
};

namespace {

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

germ_status status_of(germ::ErrorCode c) { return static_cast<germ_status>(static_cast<int>(c)); }

}  // namespace

extern "C" {

const char* germ_version(void) { return "1.0.0"; }

germ_status germ_session_parse(const char* text, germ_session** out, char** errmsg) {
  if (out) *out = nullptr;
  if (errmsg) *errmsg = nullptr;
  if (!text || !out) return GERM_E_SEMANTIC;
  try {
    *out = new germ_session{germ::parse_session(text)};
    return GERM_OK;
  } catch (const germ::Error& e) {
    if (errmsg) *errmsg = dup(e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    if (errmsg) *errmsg = dup(e.what());
    return GERM_E_INTERNAL;
  }
}

void germ_session_free(germ_session* s) { delete s; }

germ_status germ_session_serialize(const germ_session* s, char** out) {
  if (!s || !out) return GERM_E_SEMANTIC;
  try {
    *out = dup(germ::serialize_session(s->s));
    return GERM_OK;
  } catch (const germ::Error& e) {
    *out = nullptr;
    return status_of(e.code());
  } catch (const std::exception&) {
    *out = nullptr;
    return GERM_E_INTERNAL;
  }
}

int germ_session_object_count(const germ_session* s) { return s ? static_cast<int>(s->s.objects.size()) : -1; }

germ_status germ_run(int argc, const char* const* argv, char** out, char** err, int* exit_code) {
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    germ::CommandResult r = germ::run_command(args);
    if (out) *out = dup(r.out);
    if (err) *err = dup(r.err);
    if (exit_code) *exit_code = r.exit_code;
    return GERM_OK;
  } catch (const std::exception& e) {
    if (out) *out = dup("");
    if (err) *err = dup(std::string("error: ") + e.what() + "\n");
    if (exit_code) *exit_code = 1;
    return GERM_E_INTERNAL;
  }
}

void germ_string_free(char* s) { std::free(s); }

}  // extern "C"

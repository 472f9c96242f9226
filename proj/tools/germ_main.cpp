#include <cstdio>

#include "germ/germ.h"

int main(int argc, char** argv) {
  char* out = nullptr;
  char* err = nullptr;
  int code = 1;
  germ_run(argc - 1, argv + 1, &out, &err, &code);
  if (out) std::fputs(out, stdout);
  if (err) std::fputs(err, stderr);
  germ_string_free(out);
  germ_string_free(err);
  return code;
}

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <string>

// Path of the command-line binary, injected by ctest as --cli=<path>.
std::string g_cli_path;

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--cli=", 0) == 0) g_cli_path = arg.substr(6);
  }
  doctest::Context context;
  context.applyCommandLine(argc, argv);
  return context.run();
}

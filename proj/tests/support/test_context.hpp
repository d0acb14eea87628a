#pragma once

#include <string>

// Paths handed to the test binaries on the command line by CTest:
//   --cli=<path to the command line tool>
//   --data=<path to the fixture directory>
// Parsed in doctest_main.cpp / acceptance_main.cpp.
namespace volta_test {

extern std::string cli_path;
extern std::string data_dir;

inline std::string fixture(const std::string& name) { return data_dir + "/" + name; }

inline void parse_context_args(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--cli=", 0) == 0) cli_path = arg.substr(6);
    else if (arg.rfind("--data=", 0) == 0) data_dir = arg.substr(7);
  }
}

}  // namespace volta_test

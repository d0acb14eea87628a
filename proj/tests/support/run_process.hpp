#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

// Minimal process runner for command-line golden tests: runs a command line
// through /bin/sh, captures stdout (optionally merged with stderr), and
// reports the exit code.
namespace volta_test {

struct ProcResult {
  int exit_code = -1;
  std::string out;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) {
    if (ch == '\'') q += "'\\''";
    else q += ch;
  }
  q += "'";
  return q;
}

// Builds a shell command from an argv-style vector, quoting every token.
inline std::string command_line(const std::vector<std::string>& argv) {
  std::string cmd;
  for (const auto& a : argv) {
    if (!cmd.empty()) cmd += ' ';
    cmd += shell_quote(a);
  }
  return cmd;
}

inline ProcResult run_command(const std::string& cmd, bool merge_stderr = false) {
  std::string full = cmd;
  if (merge_stderr) full += " 2>&1";
  else full += " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed: " + full);
  ProcResult result;
  char buffer[4096];
  size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.out.append(buffer, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

inline ProcResult run_argv(const std::vector<std::string>& argv, bool merge_stderr = false) {
  return run_command(command_line(argv), merge_stderr);
}

}  // namespace volta_test

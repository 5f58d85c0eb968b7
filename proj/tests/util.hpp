#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "evl/parser.hpp"
#include "evl/pretty.hpp"
#include "evl/syntax.hpp"
#include "evl/types.hpp"

namespace evt {

inline evl::Tm tm(const std::string& src, evl::Mode mode = evl::Mode::Extended) {
  return evl::parse_term({src, "<test>"}, mode);
}

inline evl::Ty ty(const std::string& src, evl::Mode mode = evl::Mode::Extended) {
  return evl::parse_type({src, "<test>"}, mode);
}

inline evl::PolyType sc(const std::string& src, evl::Mode mode = evl::Mode::Extended) {
  return evl::parse_scheme({src, "<test>"}, mode);
}

// Captured stdout/stderr and exit code of a shell command.
struct CmdResult {
  std::string out;
  std::string err;
  int rc = -1;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult r;
  std::string errfile = std::string(EVL_TEST_TMPDIR) + "/cmd_stderr.txt";
  std::string full = cmd + " 2>" + shell_quote(errfile);
  FILE* p = popen(full.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed: " + cmd);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.rc = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  if (FILE* e = fopen(errfile.c_str(), "rb")) {
    while ((n = fread(buf.data(), 1, buf.size(), e)) > 0) r.err.append(buf.data(), n);
    fclose(e);
  }
  return r;
}

// Runs the installed-for-test evl binary with the given argument string,
// optionally feeding stdin from a string.
inline CmdResult run_evl(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(EVL_TOOL_PATH) + " " + args;
  if (!stdin_text.empty()) {
    std::string infile = std::string(EVL_TEST_TMPDIR) + "/cmd_stdin.txt";
    FILE* f = fopen(infile.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write " + infile);
    fwrite(stdin_text.data(), 1, stdin_text.size(), f);
    fclose(f);
    cmd += " <" + shell_quote(infile);
  }
  return run_cmd(cmd);
}

inline std::string corpus(const std::string& name) {
  return std::string(EVL_CORPUS_DIR) + "/" + name;
}

// True when a quantified variable's kind constraint reaches the variable
// itself through the prefix kinds; such a kind has no finite ground
// instance, so ground oracles cannot witness the scheme.
inline bool has_cyclic_kind(const evl::PolyType& s) {
  std::map<std::string, evl::Kind> kinds;
  for (const auto& [n, k] : s.prefix) kinds.emplace(n, k);
  for (const auto& [n, k] : s.prefix) {
    std::set<std::string> reach = evl::ftv(k);
    bool grew = true;
    while (grew && !reach.count(n)) {
      grew = false;
      std::set<std::string> next = reach;
      for (const auto& v : reach) {
        auto it = kinds.find(v);
        if (it == kinds.end()) continue;
        for (const auto& m : evl::ftv(it->second))
          if (next.insert(m).second) grew = true;
      }
      reach.swap(next);
    }
    if (reach.count(n)) return true;
  }
  return false;
}

inline std::string read_file(const std::string& path) {
  FILE* f = fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string s;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) s.append(buf.data(), n);
  fclose(f);
  return s;
}

}  // namespace evt

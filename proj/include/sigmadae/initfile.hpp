#pragma once

// Initial values and guesses read from a small line-based text format.

#include <stdexcept>
#include <string>
#include <string_view>

#include "sigmadae/codelist.hpp"
#include "sigmadae/executor.hpp"

namespace sigmadae {

class InitFileError : public std::runtime_error {
 public:
  InitFileError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// One entry per line, `#` starts a comment:
///
///   name order value          an initial value
///   guess name order value    a trial value for a nonlinear solve
///
/// Orders count derivatives, values are in derivative units. A pair may
/// appear once.
InitData parse_init(std::string_view text, const DaeModel& model);

InitData parse_init_file(const std::string& path, const DaeModel& model);

}  // namespace sigmadae

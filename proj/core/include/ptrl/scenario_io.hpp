#pragma once

#include <stdexcept>
#include <string>

#include "ptrl/scenario.hpp"

namespace ptrl::scenario {

// Raised by parse_scenario. Syntax errors carry the 1-based line/column from
// the YAML reader; semantic errors carry -1/-1 unless the offending node is
// known.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Semantic };

  ParseError(Kind kind, const std::string& message, int line = -1,
             int column = -1)
      : std::runtime_error(format(kind, message, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(Kind kind, const std::string& message, int line,
                            int column);

  Kind kind_;
  int line_;
  int column_;
};

// Parses a scenario document (see data/scenarios/*.yaml for the schema) and
// returns the fully validated scenario with derived fields recomputed.
Scenario parse_scenario(const std::string& text);

// Reads a scenario file from disk.
Scenario load_scenario_file(const std::string& path);

// Emits a document that parse_scenario maps back to an equal scenario.
std::string serialize_scenario(const Scenario& s);

}  // namespace ptrl::scenario

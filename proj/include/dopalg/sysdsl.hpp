#pragma once

// The .dop text format:
//
//   vars x1 x2;
//   params c;
//   unknowns xi1 xi2;
//   system vessiot {
//     eq: (1 - c*x2)*d[x1]xi1 - c*xi2;
//     eq: d[x1]xi1 + d[x2]xi2;
//   }
//
// Comments run from '#' to the end of the line; a comment block directly
// above 'system' becomes the note of that system. Every system in a file
// shares the declarations that precede it.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dopalg/catalog.hpp"
#include "dopalg/errors.hpp"

namespace dopalg {

struct SourceSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
};

class ParseError : public Error {
 public:
  enum class Kind { lexical, syntax, semantic };
  ParseError(Kind kind, SourceSpan span, const std::string& message);

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  // The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  SourceSpan span_;
  std::string detail_;
};

std::vector<SystemDef> parse(std::string_view text);
// Convenience for files holding exactly one system.
SystemDef parse_single(std::string_view text);

enum class PrintFormat { dsl, json, text };
std::string print(const SystemDef& s, PrintFormat format);

// One equation as an expression in the unknowns, e.g. "d[t,t]x + l1*d[t,t]th1".
std::string equation_string(const SystemDef& s, std::size_t row);

}  // namespace dopalg

#pragma once

// Line-oriented graph description:
//
//   # comment
//   vertex <id>
//   edge <id> <tail-id> <head-id> phase <float-radians> resistance <positive-float>
//
// Ids match [A-Za-z0-9_]+. Phases are reduced to [0, 2 pi) on load.

#include <cstddef>
#include <string>
#include <string_view>

#include "kirchhoff/bundle.hpp"
#include "kirchhoff/chain_complex.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/graph.hpp"

namespace kirchhoff::cli {

/// SyntaxError or SemanticError with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct GraphSpec {
  Graph graph;
  LineBundle bundle;
  ResistanceMap resistance;
};

GraphSpec parse_graph_file(std::string_view text);

/// Inverse of parse_graph_file, floats written with 17 significant digits.
std::string emit_graph_file(const GraphSpec& spec);

/// `a`, `ai`, `a+bi` or `a-bi` with decimal floats. Throws SyntaxError.
Complex parse_complex(std::string_view text);

/// "e1=1+0.5i, e2=-2": a 1-chain on all edges of g, unlisted edges 0.
/// Throws SyntaxError or UnknownEdge.
ChainVector parse_chain(std::string_view text, const Graph& g);

}  // namespace kirchhoff::cli

#include "kirchhoff/cli/graph_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace kirchhoff::cli {

namespace {

std::string located(std::size_t line, std::size_t column, const std::string& what) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
      return false;
  return true;
}

// Whole-token decimal float with an optional sign; finite values only.
std::optional<double> parse_float(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

// Longest unsigned decimal float at the front of s; returns characters used.
std::size_t scan_unsigned(std::string_view s, double& value) {
  if (s.empty() || !((s[0] >= '0' && s[0] <= '9') || s[0] == '.')) return 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || !std::isfinite(value)) return 0;
  return static_cast<std::size_t>(ptr - s.data());
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct PendingEdge {
  std::string id, tail, head;
  double phase, resistance;
  std::size_t line;
  std::size_t tail_column, head_column;
};

}  // namespace

ParseError::ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& what)
    : Error(code, located(line, column, what)), line_(line), column_(column) {}

GraphSpec parse_graph_file(std::string_view text) {
  std::vector<std::string> vertices;
  std::set<std::string, std::less<>> ids;
  std::vector<PendingEdge> edges;

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const Token& head = tokens[0];
    auto need_id = [&](const Token& t) {
      if (!valid_id(t.text))
        throw ParseError(ErrorCode::SyntaxError, line_no, t.column,
                         "invalid id '" + std::string(t.text) + "'");
      return std::string(t.text);
    };
    auto declare = [&](const Token& t) {
      std::string id = need_id(t);
      if (!ids.insert(id).second)
        throw ParseError(ErrorCode::SemanticError, line_no, t.column, "duplicate id '" + id + "'");
      return id;
    };

    if (head.text == "vertex") {
      if (tokens.size() != 2)
        throw ParseError(ErrorCode::SyntaxError, line_no, head.column,
                         "expected 'vertex <id>'");
      vertices.push_back(declare(tokens[1]));
    } else if (head.text == "edge") {
      if (tokens.size() != 8 || tokens[4].text != "phase" || tokens[6].text != "resistance") {
        const std::size_t col = tokens.size() > 4 && tokens[4].text != "phase" ? tokens[4].column
                              : tokens.size() > 6 && tokens[6].text != "resistance"
                                  ? tokens[6].column
                                  : head.column;
        throw ParseError(ErrorCode::SyntaxError, line_no, col,
                         "expected 'edge <id> <tail> <head> phase <float> resistance <float>'");
      }
      PendingEdge e;
      e.id = declare(tokens[1]);
      e.tail = need_id(tokens[2]);
      e.head = need_id(tokens[3]);
      e.line = line_no;
      e.tail_column = tokens[2].column;
      e.head_column = tokens[3].column;
      auto phase = parse_float(tokens[5].text);
      if (!phase)
        throw ParseError(ErrorCode::SyntaxError, line_no, tokens[5].column,
                         "phase must be a finite decimal number");
      auto r = parse_float(tokens[7].text);
      if (!r)
        throw ParseError(ErrorCode::SyntaxError, line_no, tokens[7].column,
                         "resistance must be a finite decimal number");
      if (!(*r > 0.0))
        throw ParseError(ErrorCode::SemanticError, line_no, tokens[7].column,
                         "resistance must be positive");
      e.phase = reduce_angle(*phase);
      e.resistance = *r;
      edges.push_back(std::move(e));
    } else {
      throw ParseError(ErrorCode::SyntaxError, line_no, head.column,
                       "unknown declaration '" + std::string(head.text) + "'");
    }
    if (end == text.size()) break;
  }

  std::set<std::string, std::less<>> vertex_set(vertices.begin(), vertices.end());
  std::vector<EdgeTriple> triples;
  std::vector<double> phases, resistances;
  for (const auto& e : edges) {
    if (!vertex_set.count(e.tail))
      throw ParseError(ErrorCode::SemanticError, e.line, e.tail_column,
                       "unknown tail vertex '" + e.tail + "'");
    if (!vertex_set.count(e.head))
      throw ParseError(ErrorCode::SemanticError, e.line, e.head_column,
                       "unknown head vertex '" + e.head + "'");
    triples.push_back({e.id, e.tail, e.head});
    phases.push_back(e.phase);
    resistances.push_back(e.resistance);
  }
  Graph g = Graph::build(vertices, triples);
  return GraphSpec{g, LineBundle(g, std::move(phases)), ResistanceMap(g, std::move(resistances))};
}

std::string emit_graph_file(const GraphSpec& spec) {
  std::string out;
  const Graph& g = spec.graph;
  for (const auto& v : g.vertex_ids()) out += "vertex " + v + "\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    out += "edge " + edge.id + " " + g.vertex_id(edge.tail) + " " + g.vertex_id(edge.head) +
           " phase " + format_double(spec.bundle.angle(e)) + " resistance " +
           format_double(spec.resistance.at(e)) + "\n";
  }
  return out;
}

Complex parse_complex(std::string_view s) {
  auto fail = [&]() -> Complex {
    throw Error(ErrorCode::SyntaxError, "malformed complex literal '" + std::string(s) + "'");
  };
  std::size_t pos = 0;
  double sign = 1.0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    sign = s[pos] == '-' ? -1.0 : 1.0;
    ++pos;
  }
  double first = 0.0;
  std::size_t used = scan_unsigned(s.substr(pos), first);
  if (used == 0) return fail();
  pos += used;
  first *= sign;
  if (pos == s.size()) return {first, 0.0};
  if (s[pos] == 'i') return pos + 1 == s.size() ? Complex(0.0, first) : fail();
  if (s[pos] != '+' && s[pos] != '-') return fail();
  const double second_sign = s[pos] == '-' ? -1.0 : 1.0;
  ++pos;
  double second = 0.0;
  used = scan_unsigned(s.substr(pos), second);
  if (used == 0) return fail();
  pos += used;
  if (pos + 1 != s.size() || s[pos] != 'i') return fail();
  return {first, second_sign * second};
}

ChainVector parse_chain(std::string_view text, const Graph& g) {
  ChainVector chain = ChainVector::zero(1, g.edge_ids());
  std::vector<bool> seen(g.num_edges(), false);
  auto trim = [](std::string_view s, std::size_t& offset) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
      s.remove_prefix(1);
      ++offset;
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };

  if (text.find_first_not_of(" \t") == std::string_view::npos) return chain;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string_view::npos) end = text.size();
    std::size_t column = begin + 1;
    std::string_view item = trim(text.substr(begin, end - begin), column);
    const bool last = end == text.size();
    begin = end + 1;
    if (item.empty()) throw ParseError(ErrorCode::SyntaxError, 1, column, "empty chain entry");
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(ErrorCode::SyntaxError, 1, column, "expected '<edge>=<complex>'");
    std::size_t id_col = column;
    std::string_view id = trim(item.substr(0, eq), id_col);
    std::size_t value_col = column + eq + 1;
    std::string_view value = trim(item.substr(eq + 1), value_col);
    if (!valid_id(id))
      throw ParseError(ErrorCode::SyntaxError, 1, id_col, "invalid edge id '" + std::string(id) + "'");
    auto e = g.find_edge(std::string(id));
    if (!e) throw Error(ErrorCode::UnknownEdge, "unknown edge '" + std::string(id) + "'");
    if (seen[*e])
      throw ParseError(ErrorCode::SyntaxError, 1, id_col, "edge '" + std::string(id) + "' listed twice");
    seen[*e] = true;
    try {
      chain.coeffs(static_cast<Eigen::Index>(*e)) = parse_complex(value);
    } catch (const Error& err) {
      throw ParseError(ErrorCode::SyntaxError, 1, value_col, err.what());
    }
    if (last) break;
  }
  return chain;
}

}  // namespace kirchhoff::cli

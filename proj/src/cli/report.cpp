#include "kirchhoff/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace kirchhoff::cli {

namespace {

std::string format_float(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(const Json& v, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(),
                                     [](const Json& x) { return x.is_structured(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          write(v[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(v[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_float(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

std::string compact(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_float(v.get<double>());
  if (v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im")) {
    const double re = v["re"].is_number() ? v["re"].get<double>() : NAN;
    const double im = v["im"].is_number() ? v["im"].get<double>() : NAN;
    std::ostringstream s;
    s.precision(10);
    s << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
    return s.str();
  }
  if (v.is_object() && std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_array(); })) {
    std::string s;
    for (auto it = v.begin(); it != v.end(); ++it)
      s += (it == v.begin() ? "" : " ") + it.key() + "=" + compact(it.value());
    return s;
  }
  if (v.is_array() && std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_array(); })) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + compact(v[i]);
    return s;
  }
  std::string s;
  write(v, s, 0);
  return s;
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  write(value, out, 0);
  out += "\n";
  return out;
}

std::string dump_table(const Json& value) {
  if (!value.is_object()) return compact(value) + "\n";
  std::ostringstream out;
  std::size_t width = 0;
  for (auto it = value.begin(); it != value.end(); ++it) width = std::max(width, it.key().size());

  std::vector<std::pair<std::string, const Json*>> tables;
  for (auto it = value.begin(); it != value.end(); ++it) {
    const Json& v = it.value();
    if (v.is_array() && !v.empty() && v[0].is_object()) {
      tables.emplace_back(it.key(), &v);
      continue;
    }
    out << it.key() << std::string(width - it.key().size() + 2, ' ') << compact(v) << "\n";
  }
  for (const auto& [name, rows] : tables) {
    out << "\n" << name << ":\n";
    std::vector<std::string> columns;
    for (auto it = (*rows)[0].begin(); it != (*rows)[0].end(); ++it) columns.push_back(it.key());
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> widths;
    for (const auto& c : columns) widths.push_back(c.size());
    for (const auto& row : *rows) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        line.push_back(row.contains(columns[c]) ? compact(row[columns[c]]) : "");
        widths[c] = std::max(widths[c], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
      out << " ";
      for (std::size_t c = 0; c < line.size(); ++c)
        out << " " << line[c] << std::string(widths[c] - line[c].size(), ' ');
      out << "\n";
    };
    emit(columns);
    for (const auto& line : cells) emit(line);
  }
  return out.str();
}

Json complex_json(Complex z) {
  Json j = Json::object();
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kirchhoff::cli

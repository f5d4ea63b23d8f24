#include <cstdio>
#include <sstream>

#include "lindchain/cli.hpp"

namespace lindchain::cli {

std::string format_real(double x) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // no "-0"
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

std::string render_csv(const Table& t, const std::vector<std::string>& header_lines, bool gnuplot_header) {
  std::ostringstream os;
  for (const auto& line : header_lines) os << "# " << line << '\n';
  if (gnuplot_header) {
    os << "# columns:";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << ' ' << i + 1 << ':' << t.columns[i];
    os << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Table& t, const std::vector<std::string>& header_lines) {
  nlohmann::ordered_json doc;
  doc["provenance"] = header_lines;
  doc["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { r[t.columns[i]] = v; }, row[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + '\n';
}

}  // namespace lindchain::cli

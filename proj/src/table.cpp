#include "upt/table.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <sstream>

namespace upt {

TableFormat parse_table_format(const std::string& s) {
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  if (s == "csv") return TableFormat::csv;
  throw InvalidArgument("unknown table format '" + s + "'");
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string row_label(const ResultKey& k, bool show_factor) {
  std::string s = method_name(k.method);
  if (show_factor) s += " (t1 x " + fixed2(k.t1_factor) + ")";
  return s;
}

}  // namespace

RenderedTable layout_table(const ResultsTable& results) {
  std::vector<double> taus;
  std::vector<std::pair<Method, double>> labels;
  bool show_factor = false;
  for (const auto& row : results.rows) {
    if (std::find(taus.begin(), taus.end(), row.key.tau) == taus.end()) taus.push_back(row.key.tau);
    const std::pair<Method, double> lab{row.key.method, row.key.t1_factor};
    if (std::find(labels.begin(), labels.end(), lab) == labels.end()) labels.push_back(lab);
    show_factor = show_factor || row.key.t1_factor != 1.0;
  }
  std::sort(taus.begin(), taus.end());
  std::sort(labels.begin(), labels.end());

  RenderedTable t;
  t.header.push_back("method");
  for (double tau : taus)
    for (const char* m : {"atp", "afp", "mfdr"}) t.header.push_back("tau=" + format_double(tau) + " " + m);
  for (const auto& [method, factor] : labels) {
    std::vector<std::string> cells{row_label({method, 0.0, factor}, show_factor)};
    for (double tau : taus) {
      const ResultRow* r = results.find(method, tau, factor);
      if (!r || r->summary.rep_count == 0) {
        cells.insert(cells.end(), 3, "NA");
        continue;
      }
      cells.push_back(fixed2(r->summary.atp));
      cells.push_back(fixed2(r->summary.afp));
      cells.push_back(fixed2(r->summary.mfdr));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string render_table(const ResultsTable& results, TableFormat format) {
  const RenderedTable t = layout_table(results);
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    if (format == TableFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    } else {
      os << '|';
      for (const auto& c : cells) os << ' ' << c << " |";
      os << '\n';
    }
  };
  line(t.header);
  if (format == TableFormat::markdown) {
    os << '|';
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? " ---: |" : " --- |");
    os << '\n';
  }
  for (const auto& r : t.rows) line(r);
  return os.str();
}

RenderedTable parse_rendered_csv(std::istream& in) {
  RenderedTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace upt

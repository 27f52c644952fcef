#pragma once

// Text rendering of a ResultsTable: methods as rows, tau as column groups of
// (atp, afp, mfdr), two decimals.

#include <iosfwd>
#include <string>
#include <vector>

#include "upt/experiment.hpp"

namespace upt {

enum class TableFormat { markdown, csv };

TableFormat parse_table_format(const std::string& s);

struct RenderedTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const RenderedTable&) const = default;
};

RenderedTable layout_table(const ResultsTable& results);
std::string render_table(const ResultsTable& results, TableFormat format);
// Reads back the csv rendering.
RenderedTable parse_rendered_csv(std::istream& in);

}  // namespace upt

#include "upt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "upt/error.hpp"

namespace upt {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const auto comma = t.find(',', start);
      const std::string field = trim(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ParseError(source, line_no, "malformed number '" + field + "' in field " + std::to_string(row.size() + 1));
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(source, line_no, "expected " + std::to_string(rows.front().size()) + " fields, found " +
                                            std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, line_no, "no data rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  return parse_matrix_csv(in, path.string());
}

Eigen::VectorXd read_vector_csv(const fs::path& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.cols() != 1) throw ParseError(path.string(), 1, "expected a single column");
  return m.col(0);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  write_matrix_csv(out, m);
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(source, line_no, "expected key=value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

void write_dataset(const fs::path& dir, const RegressionDataset& data) {
  fs::create_directories(dir);
  write_matrix_csv(dir / "X.csv", data.X);
  write_matrix_csv(dir / "Y.csv", data.Y);
  if (data.beta) write_matrix_csv(dir / "beta.csv", *data.beta);
  if (data.theta) write_matrix_csv(dir / "theta.csv", data.theta->cast<double>());
  auto meta = open_out(dir / "dataset.meta");
  write_key_values(meta, {{"master_seed", std::to_string(data.seed.master_seed)},
                          {"replicate", std::to_string(data.seed.replicate)},
                          {"n", std::to_string(data.X.rows())},
                          {"p", std::to_string(data.X.cols())}});
}

RegressionDataset read_dataset(const fs::path& dir) {
  RegressionDataset d;
  d.X = read_matrix_csv(dir / "X.csv");
  d.Y = read_vector_csv(dir / "Y.csv");
  if (d.Y.size() != d.X.rows()) throw InvalidArgument("dataset: Y length differs from X rows");
  if (fs::exists(dir / "beta.csv")) d.beta = read_vector_csv(dir / "beta.csv");
  if (fs::exists(dir / "theta.csv")) d.theta = read_vector_csv(dir / "theta.csv").cast<int>();
  if (fs::exists(dir / "dataset.meta")) {
    auto in = open_in(dir / "dataset.meta");
    const KeyValues kv = parse_key_values(in, (dir / "dataset.meta").string());
    if (auto it = kv.find("master_seed"); it != kv.end()) d.seed.master_seed = std::stoull(it->second);
    if (auto it = kv.find("replicate"); it != kv.end()) d.seed.replicate = std::stoull(it->second);
  }
  return d;
}

}  // namespace upt

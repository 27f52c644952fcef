#pragma once

// Headerless numeric CSV, key=value sidecars, and dataset directories.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "upt/common.hpp"
#include "upt/datagen.hpp"

namespace upt {

// Shortest round-trip decimal representation.
std::string format_double(double v);

// Every row must have the same number of fields; errors carry the line number.
Eigen::MatrixXd parse_matrix_csv(std::istream& in, const std::string& source_name);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
Eigen::VectorXd read_vector_csv(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& source_name);
void write_key_values(std::ostream& out, const KeyValues& kv);

// X.csv, Y.csv, optional beta.csv / theta.csv and dataset.meta.
void write_dataset(const std::filesystem::path& dir, const RegressionDataset& data);
RegressionDataset read_dataset(const std::filesystem::path& dir);

}  // namespace upt

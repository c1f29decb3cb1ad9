#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace alr {

enum class ColumnKind { numeric, categorical };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
};

// Schema for one CSV file: which header columns are categorical and which
// column holds the regression target. Every other column is numeric.
struct CsvSchema {
  std::string target_column;
  std::vector<std::string> categorical_columns;
};

// Parsed CSV before encoding/normalization. Numeric cells are stored parsed,
// categorical cells as strings.
struct RawDataset {
  std::vector<ColumnSchema> columns;   // feature columns, file order
  std::size_t target_index = 0;        // position of the target in the file
  Eigen::MatrixXd numeric;             // N x (#numeric feature columns)
  std::vector<std::vector<std::string>> categorical;  // one vector per categorical column
  Eigen::VectorXd y;

  std::size_t rows() const { return static_cast<std::size_t>(y.size()); }
};

// Fully prepared feature matrix: one-hot encoded and z-scored per column.
// Immutable after construction and safe to share across threads.
struct Dataset {
  std::string name;
  Eigen::MatrixXd X;                   // N x d
  Eigen::VectorXd y;                   // N, original units
  std::vector<std::string> feature_names;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
};

// Reads a comma-separated file with one header row. '.' decimal separator,
// no quoting (a quoted cell is rejected). Missing values are rejected.
RawDataset load_csv(const std::string& path, const CsvSchema& schema);

// Expands each categorical column into one indicator column per distinct
// value, ordered by first appearance. Numeric columns pass through in place.
struct EncodedMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> names;
};
EncodedMatrix one_hot_encode(const RawDataset& raw);

// Centers and scales every column to mean 0 / sample sd 1 (divisor N-1).
// Constant columns become all zeros. y is kept in original units.
Dataset zscore_normalize(const EncodedMatrix& encoded, const Eigen::VectorXd& y,
                         std::string name = "");

// load -> encode -> normalize in one step.
Dataset load_dataset(const std::string& path, const CsvSchema& schema,
                     std::string name = "");

}  // namespace alr

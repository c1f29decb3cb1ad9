#include "alr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "alr/error.hpp"

namespace alr {
namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  if (line.find('"') != std::string::npos) {
    throw parse_error("quoted cells are not supported (line " +
                      std::to_string(line_no) + ")");
  }
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  for (auto& c : cells) {
    const auto first = c.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      c.clear();
      continue;
    }
    const auto last = c.find_last_not_of(" \t\r");
    c = c.substr(first, last - first + 1);
  }
  return cells;
}

double parse_numeric_cell(const std::string& cell, std::size_t row,
                          const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw parse_error("cell \"" + cell + "\" in numeric column \"" + column +
                      "\" (row " + std::to_string(row) + ") is not a number");
  }
  return value;
}

}  // namespace

RawDataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open \"" + path + "\"");

  std::string header;
  if (!std::getline(in, header)) throw parse_error("\"" + path + "\" is empty");
  const std::vector<std::string> names = split_line(header, 1);

  auto is_categorical = [&](const std::string& name) {
    return std::find(schema.categorical_columns.begin(),
                     schema.categorical_columns.end(),
                     name) != schema.categorical_columns.end();
  };

  std::size_t target = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == schema.target_column) target = i;
  }
  if (target == names.size()) {
    throw parse_error("target column \"" + schema.target_column +
                      "\" not found in \"" + path + "\"");
  }
  if (is_categorical(schema.target_column)) {
    throw config_error("target column \"" + schema.target_column +
                       "\" must be numeric");
  }
  for (const auto& c : schema.categorical_columns) {
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw config_error("categorical column \"" + c + "\" not in header of \"" +
                         path + "\"");
    }
  }

  RawDataset raw;
  raw.target_index = target;
  std::size_t n_numeric = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i == target) continue;
    ColumnSchema col{names[i], is_categorical(names[i]) ? ColumnKind::categorical
                                                        : ColumnKind::numeric};
    if (col.kind == ColumnKind::numeric) ++n_numeric;
    raw.columns.push_back(std::move(col));
  }
  raw.categorical.resize(raw.columns.size() - n_numeric);

  std::vector<double> numeric_cells;
  std::vector<double> targets;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    const auto cells = split_line(line, line_no);
    if (cells.size() != names.size()) {
      throw parse_error("row " + std::to_string(line_no - 1) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(names.size()));
    }
    std::size_t cat_slot = 0;
    std::size_t col_slot = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].empty()) {
        throw parse_error("missing value in column \"" + names[i] + "\" (row " +
                          std::to_string(line_no - 1) + ")");
      }
      if (i == target) {
        targets.push_back(parse_numeric_cell(cells[i], line_no - 1, names[i]));
        continue;
      }
      const auto& col = raw.columns[col_slot++];
      if (col.kind == ColumnKind::numeric) {
        numeric_cells.push_back(parse_numeric_cell(cells[i], line_no - 1, names[i]));
      } else {
        raw.categorical[cat_slot++].push_back(cells[i]);
      }
    }
  }

  const std::size_t n_rows = targets.size();
  if (n_rows < 2) {
    throw parse_error("\"" + path + "\" has " + std::to_string(n_rows) +
                      " data rows, need at least 2");
  }

  raw.numeric.resize(static_cast<Eigen::Index>(n_rows),
                     static_cast<Eigen::Index>(n_numeric));
  std::size_t flat = 0;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_numeric; ++c) {
      raw.numeric(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          numeric_cells[flat++];
    }
  }
  raw.y = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                            static_cast<Eigen::Index>(n_rows));
  return raw;
}

EncodedMatrix one_hot_encode(const RawDataset& raw) {
  const Eigen::Index n = static_cast<Eigen::Index>(raw.rows());

  // Pass 1: distinct values per categorical column, first-appearance order.
  std::vector<std::vector<std::string>> levels(raw.categorical.size());
  for (std::size_t c = 0; c < raw.categorical.size(); ++c) {
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& v : raw.categorical[c]) {
      if (seen.emplace(v, levels[c].size()).second) levels[c].push_back(v);
    }
  }

  Eigen::Index d = 0;
  std::size_t cat_slot_count = 0;
  for (const auto& col : raw.columns) {
    if (col.kind == ColumnKind::numeric) {
      ++d;
    } else {
      d += static_cast<Eigen::Index>(levels[cat_slot_count++].size());
    }
  }

  EncodedMatrix out;
  out.values = Eigen::MatrixXd::Zero(n, d);
  out.names.reserve(static_cast<std::size_t>(d));

  Eigen::Index dst = 0;
  Eigen::Index numeric_src = 0;
  std::size_t cat_slot = 0;
  for (const auto& col : raw.columns) {
    if (col.kind == ColumnKind::numeric) {
      out.values.col(dst) = raw.numeric.col(numeric_src++);
      out.names.push_back(col.name);
      ++dst;
      continue;
    }
    const auto& vals = raw.categorical[cat_slot];
    const auto& lv = levels[cat_slot];
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      index.emplace(lv[i], static_cast<Eigen::Index>(i));
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      out.values(r, dst + index.at(vals[static_cast<std::size_t>(r)])) = 1.0;
    }
    for (const auto& level : lv) out.names.push_back(col.name + "=" + level);
    dst += static_cast<Eigen::Index>(lv.size());
    ++cat_slot;
  }
  return out;
}

Dataset zscore_normalize(const EncodedMatrix& encoded, const Eigen::VectorXd& y,
                         std::string name) {
  const Eigen::Index n = encoded.values.rows();
  const Eigen::Index d = encoded.values.cols();
  if (n < 2) throw invalid_argument_error("need at least 2 rows to normalize");
  if (y.size() != n) throw invalid_argument_error("feature/target row mismatch");
  if (n < d + 1) {
    throw invalid_argument_error("dataset has " + std::to_string(n) +
                                 " rows but " + std::to_string(d) +
                                 " encoded features; need N >= d+1");
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.feature_names = encoded.names;
  ds.y = y;
  ds.X.resize(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double mean = encoded.values.col(c).mean();
    const Eigen::VectorXd centered = encoded.values.col(c).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
    if (sd == 0.0) {
      ds.X.col(c).setZero();
    } else {
      ds.X.col(c) = centered / sd;
    }
  }
  return ds;
}

Dataset load_dataset(const std::string& path, const CsvSchema& schema,
                     std::string name) {
  const RawDataset raw = load_csv(path, schema);
  const EncodedMatrix encoded = one_hot_encode(raw);
  return zscore_normalize(encoded, raw.y, std::move(name));
}

}  // namespace alr

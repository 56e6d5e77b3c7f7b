#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "see/types.hpp"

namespace see {

/// Which column holds the class label: a header name, or an index where
/// negative values count from the end (-1 is the last column).
using LabelColumn = std::variant<std::string, std::int64_t>;

struct CsvOptions {
  LabelColumn label_column = std::int64_t{-1};
  std::string positive_label = "1";
  /// Feature columns to one-hot expand into name=value indicator columns.
  std::vector<std::string> categorical;
};

/// Reads comma-separated numeric features plus one label column. The first
/// row is a header when it holds text where the second row holds numbers.
/// Labels equal to positive_label become Malicious, everything else
/// Legitimate. Values are returned in original units.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);
Dataset parse_csv(const std::string& text, const CsvOptions& options);

/// One vector per row, header f0..f{d-1} (or the given names).
void write_vectors_csv(const std::filesystem::path& path,
                       const std::vector<FeatureVector>& rows,
                       const std::vector<std::string>& names = {});
std::vector<FeatureVector> read_vectors_csv(const std::filesystem::path& path);

/// Vectors plus a trailing "label" column (0/1).
void write_labeled_csv(const std::filesystem::path& path, const Dataset& data);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace see

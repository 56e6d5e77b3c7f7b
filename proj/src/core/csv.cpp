#include "see/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "see/errors.hpp"

namespace see {
namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::optional<double> parse_number(std::string_view cell) {
  std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  std::string_view v = t;
  if (v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

struct Table {
  std::vector<std::string> header;
  bool has_header = false;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(const std::string& text) {
  Table table;
  std::vector<std::vector<std::string>> all;
  std::vector<std::size_t> lines;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    all.push_back(split_csv_line(line));
    lines.push_back(line_no);
  }
  if (all.size() < 2) throw ParseError("CSV needs at least 2 rows");

  const auto& first = all[0];
  const auto& second = all[1];
  bool header = std::none_of(first.begin(), first.end(), [](const auto& c) {
    return parse_number(c).has_value();
  });
  for (std::size_t j = 0; !header && j < first.size() && j < second.size();
       ++j) {
    header = !parse_number(first[j]) && parse_number(second[j]);
  }

  std::size_t start = 0;
  if (header) {
    table.has_header = true;
    for (const auto& c : first) table.header.push_back(trim(c));
    start = 1;
  }
  const std::size_t width = all[0].size();
  for (std::size_t i = start; i < all.size(); ++i) {
    if (all[i].size() != width) {
      throw ParseError("row " + std::to_string(lines[i]) + " has " +
                       std::to_string(all[i].size()) + " columns, expected " +
                       std::to_string(width));
    }
    table.rows.push_back(std::move(all[i]));
    table.line_numbers.push_back(lines[i]);
  }
  if (table.rows.empty()) throw ParseError("CSV has no data rows");
  return table;
}

std::size_t resolve_label_column(const Table& table, const LabelColumn& col) {
  const std::size_t width = table.rows.front().size();
  if (const auto* name = std::get_if<std::string>(&col)) {
    auto it = std::find(table.header.begin(), table.header.end(), *name);
    if (!table.has_header || it == table.header.end()) {
      throw ParseError("unknown label column '" + *name + "'");
    }
    return static_cast<std::size_t>(it - table.header.begin());
  }
  std::int64_t idx = std::get<std::int64_t>(col);
  std::int64_t w = static_cast<std::int64_t>(width);
  if (idx < 0) idx += w;
  if (idx < 0 || idx >= w) {
    throw ParseError("unknown label column index " +
                     std::to_string(std::get<std::int64_t>(col)));
  }
  return static_cast<std::size_t>(idx);
}

bool label_matches(const std::string& cell, const std::string& positive) {
  std::string c = trim(cell);
  std::string p = trim(positive);
  if (c == p) return true;
  auto cn = parse_number(c);
  auto pn = parse_number(p);
  return cn && pn && *cn == *pn;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      cur.push_back(ch);
    } else if (ch == ',' && !quoted) {
      cells.push_back(unquote(trim(cur)));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(unquote(trim(cur)));
  return cells;
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  Table table = read_table(text);
  const std::size_t width = table.rows.front().size();
  const std::size_t label_col = resolve_label_column(table, options.label_column);
  if (width < 2) throw ParseError("CSV needs at least one feature column");

  auto column_name = [&](std::size_t j) {
    return table.has_header ? table.header[j] : "f" + std::to_string(j);
  };

  std::set<std::size_t> categorical;
  for (const auto& name : options.categorical) {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (!table.has_header || it == table.header.end()) {
      throw ParseError("unknown categorical column '" + name + "'");
    }
    auto j = static_cast<std::size_t>(it - table.header.begin());
    if (j == label_col) throw ParseError("label column cannot be categorical");
    categorical.insert(j);
  }

  // Output layout: numeric columns keep their position, categorical ones
  // expand in place into sorted name=value indicators.
  std::map<std::size_t, std::vector<std::string>> levels;
  for (std::size_t j : categorical) {
    std::set<std::string> distinct;
    for (const auto& row : table.rows) distinct.insert(row[j]);
    levels[j] = {distinct.begin(), distinct.end()};
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < width; ++j) {
    if (j == label_col) continue;
    if (categorical.count(j)) {
      for (const auto& level : levels[j]) names.push_back(column_name(j) + "=" + level);
    } else {
      names.push_back(column_name(j));
    }
  }

  std::vector<FeatureVector> samples;
  std::vector<ClassLabel> labels;
  samples.reserve(table.rows.size());
  labels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    FeatureVector v;
    v.reserve(names.size());
    for (std::size_t j = 0; j < width; ++j) {
      if (j == label_col) continue;
      if (categorical.count(j)) {
        for (const auto& level : levels[j]) v.push_back(row[j] == level ? 1.0 : 0.0);
        continue;
      }
      auto num = parse_number(row[j]);
      if (!num) {
        throw ParseError("non-numeric value '" + row[j] + "' at row " +
                         std::to_string(table.line_numbers[i]) + ", column '" +
                         column_name(j) + "'");
      }
      v.push_back(*num);
    }
    samples.push_back(std::move(v));
    labels.push_back(label_matches(row[label_col], options.positive_label)
                         ? ClassLabel::Malicious
                         : ClassLabel::Legitimate);
  }
  return Dataset(std::move(samples), std::move(labels), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), options);
}

void write_vectors_csv(const std::filesystem::path& path,
                       const std::vector<FeatureVector>& rows,
                       const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  std::size_t d = rows.empty() ? names.size() : rows.front().size();
  auto header = names.empty() ? default_feature_names(d) : names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    out << (j ? "," : "") << header[j];
  }
  out << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<FeatureVector> read_vectors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'");
  std::vector<FeatureVector> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    std::vector<std::optional<double>> parsed;
    for (const auto& c : cells) parsed.push_back(parse_number(c));
    bool numeric = std::all_of(parsed.begin(), parsed.end(),
                               [](const auto& p) { return p.has_value(); });
    if (!numeric) {
      if (line_no == 1) continue;  // header
      throw ParseError("non-numeric value at row " + std::to_string(line_no) +
                       " of '" + path.string() + "'");
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError("row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(width));
    }
    FeatureVector v;
    for (const auto& p : parsed) v.push_back(*p);
    rows.push_back(std::move(v));
  }
  return rows;
}

void write_labeled_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (const auto& n : data.feature_names()) out << n << ',';
  out << "label\n" << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.sample(i)) out << v << ',';
    out << to_int(data.label(i)) << '\n';
  }
}

}  // namespace see

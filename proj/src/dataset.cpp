#include "gsavg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gsavg/rng.hpp"

namespace gsavg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Comma-separated fields with optional double quotes ("" escapes a quote).
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.emplace_back(trim(cur));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::size_t Dataset::count(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::vector<std::size_t> Dataset::indices_of(int label) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) idx.push_back(i);
  return idx;
}

Matrix Dataset::class_rows(int label) const {
  const auto idx = indices_of(label);
  Matrix m = features.select_rows(idx);
  if (m.cols() == 0) m = Matrix(0, dim());
  return m;
}

void Dataset::validate(bool require_both_classes) const {
  if (labels.size() != features.rows()) {
    throw std::invalid_argument("dataset: label count does not match row count");
  }
  for (int l : labels) {
    if (l != 1 && l != 2) throw std::invalid_argument("dataset: labels must be 1 or 2");
  }
  if (!feature_names.empty() && feature_names.size() != dim()) {
    throw std::invalid_argument("dataset: feature name count does not match dimension");
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature value");
  }
  if (require_both_classes && (count(1) == 0 || count(2) == 0)) {
    throw std::invalid_argument("dataset: both classes must be present");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features.select_rows(rows);
  if (out.features.cols() == 0) out.features = Matrix(0, dim());
  out.labels.reserve(rows.size());
  for (auto r : rows) out.labels.push_back(labels[r]);
  out.feature_names = feature_names;
  out.label_names = label_names;
  return out;
}

Dataset Dataset::from_classes(const Matrix& class1, const Matrix& class2) {
  if (class1.cols() != class2.cols()) {
    throw std::invalid_argument("dataset: class blocks differ in dimension");
  }
  Dataset out;
  out.features = Matrix(0, class1.cols());
  for (std::size_t i = 0; i < class1.rows(); ++i) out.features.append_row(class1.row(i));
  for (std::size_t i = 0; i < class2.rows(); ++i) out.features.append_row(class2.row(i));
  out.labels.assign(class1.rows(), 1);
  out.labels.insert(out.labels.end(), class2.rows(), 2);
  for (std::size_t d = 0; d < class1.cols(); ++d) out.feature_names.push_back("f" + std::to_string(d + 1));
  out.label_names = {"1", "2"};
  return out;
}

Dataset parse_csv(const std::string& text, const LabelColumn& label_column) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("csv: missing header row");
  if (header.size() < 2) throw DataError("csv: need at least one feature column and a label column");

  std::size_t label_idx = header.size() - 1;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw DataError("csv: label column '" + *name + "' not found in header");
    label_idx = static_cast<std::size_t>(it - header.begin());
  } else if (const auto* idx = std::get_if<std::size_t>(&label_column)) {
    if (*idx >= header.size()) {
      throw DataError("csv: label column index " + std::to_string(*idx) + " out of range");
    }
    label_idx = *idx;
  }

  Dataset data;
  const std::size_t dim = header.size() - 1;
  data.features = Matrix(0, dim);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) data.feature_names.push_back(header[c]);

  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("csv: line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    std::size_t k = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      const std::string where = "line " + std::to_string(line_no) + ", column " +
                                std::to_string(c + 1) + " ('" + header[c] + "')";
      if (cell.empty()) throw DataError("csv: empty cell at " + where);
      if (c == label_idx) continue;
      double v = 0.0;
      const char* first = cell.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError("csv: non-numeric cell '" + cell + "' at " + where);
      }
      if (!std::isfinite(v)) throw DataError("csv: non-finite value at " + where);
      row[k++] = v;
    }
    const std::string& tag = fields[label_idx];
    auto it = std::find(data.label_names.begin(), data.label_names.end(), tag);
    if (it == data.label_names.end()) {
      if (data.label_names.size() == 2) {
        throw DataError("csv: more than two distinct labels (multi-class unsupported); third label '" +
                        tag + "' at line " + std::to_string(line_no));
      }
      data.label_names.push_back(tag);
      it = data.label_names.end() - 1;
    }
    data.labels.push_back(static_cast<int>(it - data.label_names.begin()) + 1);
    data.features.append_row(row);
  }
  if (data.label_names.size() < 2) throw DataError("csv: fewer than two distinct labels");
  return data;
}

FeatureTable parse_feature_table(const std::string& text, std::size_t dim,
                                 const LabelColumn& label_column) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("csv: missing header row");
  std::optional<std::size_t> label_idx;
  if (header.size() == dim + 1) {
    label_idx = header.size() - 1;
    if (const auto* name = std::get_if<std::string>(&label_column)) {
      auto it = std::find(header.begin(), header.end(), *name);
      if (it == header.end()) throw DataError("csv: label column '" + *name + "' not found in header");
      label_idx = static_cast<std::size_t>(it - header.begin());
    } else if (const auto* idx = std::get_if<std::size_t>(&label_column)) {
      if (*idx >= header.size()) throw DataError("csv: label column index out of range");
      label_idx = *idx;
    }
  } else if (header.size() != dim) {
    throw DataError("csv: expected " + std::to_string(dim) + " feature columns (optionally plus a label), found " +
                    std::to_string(header.size()) + " columns");
  }
  FeatureTable out;
  out.features = Matrix(0, dim);
  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("csv: line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    std::size_t k = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      const std::string where = "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1);
      if (cell.empty()) throw DataError("csv: empty cell at " + where);
      if (label_idx && c == *label_idx) {
        out.tags.push_back(cell);
        continue;
      }
      double v = 0.0;
      const char* first = cell.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw DataError("csv: non-numeric cell '" + cell + "' at " + where);
      }
      row[k++] = v;
    }
    out.features.append_row(row);
  }
  return out;
}

FeatureTable load_feature_table(const std::filesystem::path& path, std::size_t dim,
                                const LabelColumn& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("csv: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_feature_table(ss.str(), dim, label_column);
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("csv: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), label_column);
}

std::string to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t d = 0; d < data.dim(); ++d) {
    out += quote_if_needed(d < data.feature_names.size() ? data.feature_names[d]
                                                         : "f" + std::to_string(d + 1));
    out += ',';
  }
  out += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.features.row(i)) {
      out += format_double(v);
      out += ',';
    }
    const int l = data.labels[i];
    out += static_cast<std::size_t>(l - 1) < data.label_names.size()
               ? quote_if_needed(data.label_names[static_cast<std::size_t>(l - 1)])
               : std::to_string(l);
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("csv: cannot write '" + path.string() + "'");
  out << to_csv(data);
  if (!out) throw DataError("csv: write failed for '" + path.string() + "'");
}

SplitIndices stratified_split_indices(const Dataset& data, double train_fraction,
                                      std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train fraction must lie in (0, 1)");
  }
  SplitIndices out;
  for (int label : {1, 2}) {
    auto idx = data.indices_of(label);
    if (idx.size() < 2) {
      throw std::invalid_argument("split: class " + std::to_string(label) + " has fewer than 2 rows");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(idx));
    // The 1e-9 slack keeps products such as 0.7 * 10 from rounding up.
    const auto n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(idx.size()) - 1e-9));
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction,
                                             std::uint64_t seed) {
  const auto s = stratified_split_indices(data, train_fraction, seed);
  return {data.subset(s.train), data.subset(s.test)};
}

ColumnScaling ColumnScaling::fit(const Matrix& reference) {
  ColumnScaling s;
  const std::size_t n = reference.rows();
  s.mean.assign(reference.cols(), 0.0);
  s.scale.assign(reference.cols(), 1.0);
  if (n == 0) return s;
  for (std::size_t c = 0; c < reference.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += reference(r, c);
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (reference(r, c) - mu) * (reference(r, c) - mu);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.mean[c] = mu;
    s.scale[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void ColumnScaling::apply(Matrix& target) const {
  if (target.cols() != mean.size()) throw std::invalid_argument("scaling: dimension mismatch");
  for (std::size_t r = 0; r < target.rows(); ++r)
    for (std::size_t c = 0; c < target.cols(); ++c) target(r, c) = (target(r, c) - mean[c]) / scale[c];
}

std::uint64_t fingerprint(const Dataset& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::uint64_t shape[2] = {data.size(), data.dim()};
  mix(shape, sizeof shape);
  mix(data.features.data().data(), data.features.data().size() * sizeof(double));
  mix(data.labels.data(), data.labels.size() * sizeof(int));
  return h;
}

}  // namespace gsavg

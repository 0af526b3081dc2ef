#include <commonlines/io.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace clines::io {

namespace {

const std::vector<std::string> kMatrixKinds = {"pure", "scaled", "noisy", "heterogeneous"};

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(const std::string &row, size_t expect, const std::string &what) {
  std::istringstream in(row);
  std::vector<double> out;
  std::string tok;
  while (in >> tok)
    out.push_back(parse_double(tok));
  if (out.size() != expect)
    throw SchemaError(what + ": expected " + std::to_string(expect) + " values per row, got " +
                      std::to_string(out.size()));
  return out;
}

int parse_n(const Document &doc, size_t rows_per_n) {
  long long n = parse_int(doc.get("n"));
  if (n < 0 || n > 100000)
    throw SchemaError("n out of range");
  if (doc.rows.size() != rows_per_n * static_cast<size_t>(n))
    throw SchemaError("expected " + std::to_string(rows_per_n * n) + " data rows, got " +
                      std::to_string(doc.rows.size()));
  return static_cast<int>(n);
}

} // namespace

void Document::set(const std::string &key, const std::string &value) {
  for (auto &kv : header)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  header.emplace_back(key, value);
}

bool Document::has(const std::string &key) const {
  for (const auto &kv : header)
    if (kv.first == key)
      return true;
  return false;
}

const std::string &Document::get(const std::string &key) const {
  for (const auto &kv : header)
    if (kv.first == key)
      return kv.second;
  throw SchemaError("missing key '" + key + "'");
}

std::string serialize(const Document &doc) {
  std::string out = "version: " + std::to_string(kFormatVersion) + "\n";
  for (const auto &[k, v] : doc.header)
    if (k != "version")
      out += k + ": " + v + "\n";
  if (doc.has_data) {
    out += "data:\n";
    for (const auto &r : doc.rows)
      out += r + "\n";
  }
  return out;
}

Document parse(const std::string &text) {
  Document doc;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (doc.has_data) {
      if (!trim(line).empty())
        doc.rows.push_back(line);
      continue;
    }
    if (trim(line).empty() || trim(line)[0] == '#')
      continue;
    if (trim(line) == "data:") {
      doc.has_data = true;
      continue;
    }
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw SchemaError("expected 'key: value', got '" + line + "'");
    std::string key = trim(line.substr(0, colon)), value = trim(line.substr(colon + 1));
    if (first) {
      if (key != "version")
        throw SchemaError("first line must be 'version: 1'");
      if (value != std::to_string(kFormatVersion))
        throw SchemaError("unsupported format version " + value);
      first = false;
    }
    if (key.empty())
      throw SchemaError("empty key");
    if (doc.has(key))
      throw SchemaError("duplicate key '" + key + "'");
    doc.header.emplace_back(key, value);
  }
  if (first)
    throw SchemaError("empty document");
  return doc;
}

Document read_document(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void write_document(const std::string &path, const Document &doc) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw Error("cannot write '" + path + "'");
  f << serialize(doc);
  if (!f)
    throw Error("write failed for '" + path + "'");
}

void expect_kind(const Document &doc, const std::string &kind) {
  if (doc.get("kind") != kind)
    throw SchemaError("expected a " + kind + " file, got kind '" + doc.get("kind") + "'");
}

std::string format_double(double x) {
  if (!std::isfinite(x))
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0)
    x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string &s) {
  const char *b = s.c_str();
  char *end = nullptr;
  errno = 0;
  double v = std::strtod(b, &end);
  // Underflow to a subnormal also sets ERANGE but is exact enough to keep.
  if (end == b || *end != '\0' || !std::isfinite(v) || (errno == ERANGE && std::abs(v) >= 1.0))
    throw SchemaError("bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string &s) {
  const char *b = s.c_str();
  char *end = nullptr;
  errno = 0;
  long long v = std::strtoll(b, &end, 10);
  if (end == b || *end != '\0' || errno == ERANGE)
    throw SchemaError("bad integer '" + s + "'");
  return v;
}

std::string join(const std::vector<double> &v, char sep) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k)
      out += sep;
    out += format_double(v[k]);
  }
  return out;
}

Document matrix_document(const CommonLinesMatrix &a, const std::string &kind) {
  if (std::find(kMatrixKinds.begin(), kMatrixKinds.end(), kind) == kMatrixKinds.end())
    throw InvalidArgument("unknown matrix kind '" + kind + "'");
  Document d;
  d.set("kind", "common_lines_matrix");
  d.set("matrix_kind", kind);
  d.set("n", std::to_string(a.n()));
  d.has_data = true;
  for (Eigen::Index r = 0; r < a.flat().rows(); ++r) {
    std::vector<double> row(a.flat().cols());
    for (Eigen::Index c = 0; c < a.flat().cols(); ++c)
      row[c] = a.flat()(r, c);
    d.rows.push_back(join(row));
  }
  return d;
}

MatrixFile matrix_from_document(const Document &doc) {
  expect_kind(doc, "common_lines_matrix");
  MatrixFile f;
  f.kind = doc.get("matrix_kind");
  if (std::find(kMatrixKinds.begin(), kMatrixKinds.end(), f.kind) == kMatrixKinds.end())
    throw SchemaError("unknown matrix kind '" + f.kind + "'");
  const int n = parse_n(doc, 2);
  Mat a(2 * n, n);
  for (int r = 0; r < 2 * n; ++r) {
    auto row = parse_row(doc.rows[r], n, "matrix");
    for (int c = 0; c < n; ++c)
      a(r, c) = row[c];
  }
  try {
    f.matrix = CommonLinesMatrix(a);
  } catch (const InvalidArgument &e) {
    throw SchemaError(e.what());
  }
  return f;
}

Document rotations_document(const RotationSet &r) {
  Document d;
  d.set("kind", "rotations");
  d.set("n", std::to_string(r.size()));
  d.has_data = true;
  for (const auto &rot : r) {
    std::vector<double> row;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        row.push_back(rot.matrix()(i, j));
    d.rows.push_back(join(row));
  }
  return d;
}

RotationSet rotations_from_document(const Document &doc) {
  expect_kind(doc, "rotations");
  const int n = parse_n(doc, 1);
  RotationSet out;
  for (int k = 0; k < n; ++k) {
    auto row = parse_row(doc.rows[k], 9, "rotations");
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = row[3 * i + j];
    if (!Rotation::is_valid(m, 1e-9))
      throw SchemaError("row " + std::to_string(k) + " is not a proper rotation");
    out.emplace_back(m, 1e-9);
  }
  return out;
}

Document partition_document(const Partition &p) {
  Document d;
  d.set("kind", "partition");
  d.set("n", std::to_string(p.n()));
  d.set("clusters", std::to_string(p.num_clusters()));
  std::string labels;
  for (int k = 0; k < p.n(); ++k)
    labels += (k ? " " : "") + std::to_string(p.labels()[k]);
  d.set("labels", labels);
  return d;
}

Partition partition_from_document(const Document &doc) {
  expect_kind(doc, "partition");
  long long n = parse_int(doc.get("n"));
  std::istringstream in(doc.get("labels"));
  std::vector<int> labels;
  std::string tok;
  while (in >> tok)
    labels.push_back(static_cast<int>(parse_int(tok)));
  if (static_cast<long long>(labels.size()) != n)
    throw SchemaError("partition has " + std::to_string(labels.size()) + " labels, expected " +
                      std::to_string(n));
  try {
    return Partition(labels);
  } catch (const InvalidArgument &e) {
    throw SchemaError(e.what());
  }
}

Document scales_document(const ScaleMatrix &l) {
  Document d;
  d.set("kind", "scales");
  d.set("n", std::to_string(l.n()));
  d.has_data = true;
  for (int i = 0; i < l.n(); ++i) {
    std::vector<double> row(l.n());
    for (int j = 0; j < l.n(); ++j)
      row[j] = l(i, j);
    d.rows.push_back(join(row));
  }
  return d;
}

ScaleMatrix scales_from_document(const Document &doc) {
  expect_kind(doc, "scales");
  const int n = parse_n(doc, 1);
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    auto row = parse_row(doc.rows[i], n, "scales");
    for (int j = 0; j < n; ++j)
      l(i, j) = row[j];
  }
  try {
    return ScaleMatrix(l);
  } catch (const InvalidArgument &e) {
    throw SchemaError(e.what());
  }
}

} // namespace clines::io

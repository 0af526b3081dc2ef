#pragma once

#include <commonlines/core.hpp>

#include <string>
#include <utility>
#include <vector>

namespace clines::io {

// Malformed or unexpected file contents.
class SchemaError : public Error {
public:
  using Error::Error;
};

inline constexpr int kFormatVersion = 1;

// "key: value" header lines, optionally followed by a "data:" line and rows.
struct Document {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> rows;
  bool has_data = false;

  void set(const std::string &key, const std::string &value);
  bool has(const std::string &key) const;
  const std::string &get(const std::string &key) const;  // SchemaError if missing
};

std::string serialize(const Document &doc);
Document parse(const std::string &text);
Document read_document(const std::string &path);
void write_document(const std::string &path, const Document &doc);
// Checks the kind (parse already checks the version).
void expect_kind(const Document &doc, const std::string &kind);

// 17 significant digits: parse(format(x)) == x for every finite double.
std::string format_double(double x);
double parse_double(const std::string &s);
long long parse_int(const std::string &s);
std::string join(const std::vector<double> &v, char sep = ' ');

struct MatrixFile {
  CommonLinesMatrix matrix;
  std::string kind;  // pure | scaled | noisy | heterogeneous
};

Document matrix_document(const CommonLinesMatrix &a, const std::string &kind);
MatrixFile matrix_from_document(const Document &doc);
Document rotations_document(const RotationSet &r);
RotationSet rotations_from_document(const Document &doc);
Document partition_document(const Partition &p);
Partition partition_from_document(const Document &doc);
Document scales_document(const ScaleMatrix &l);
ScaleMatrix scales_from_document(const Document &doc);

} // namespace clines::io

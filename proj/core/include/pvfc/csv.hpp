#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pvfc::csv {

/// One data row: trimmed fields plus the 1-based source line number.
struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// Streams a headered CSV file. Verifies the header matches `expected_header`
/// exactly, then invokes `on_row` per data row. Blank lines are skipped.
/// Throws std::runtime_error naming the file/line on any structural problem.
void for_each_row(const std::string& path, const std::vector<std::string>& expected_header,
                  const std::function<void(const Row&)>& on_row);

/// Field decoding helpers; all name the line on failure. An empty field is a
/// missing value: `parse_double_opt` returns nullopt for it.
double parse_double(const std::string& field, std::size_t line, const std::string& col);
std::optional<double> parse_double_opt(const std::string& field, std::size_t line,
                                       const std::string& col);
long parse_long(const std::string& field, std::size_t line, const std::string& col);

/// Buffered CSV writer. Doubles are written with %.17g so that re-parsing
/// reproduces them bit-exactly.
class Writer {
 public:
  explicit Writer(const std::string& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void header(const std::vector<std::string>& cols);
  Writer& field(const std::string& s);
  Writer& field(double v);
  Writer& field(long v);
  Writer& blank_field();
  void end_row();

 private:
  std::FILE* f_ = nullptr;
  bool row_open_ = false;
  std::string path_;
};

std::string format_double(double v);

}  // namespace pvfc::csv

#include "pvfc/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pvfc::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      std::string f = line.substr(begin, i - begin);
      // strip surrounding whitespace and a trailing CR
      while (!f.empty() && (f.back() == '\r' || f.back() == ' ' || f.back() == '\t')) f.pop_back();
      std::size_t s = 0;
      while (s < f.size() && (f[s] == ' ' || f[s] == '\t')) ++s;
      out.push_back(f.substr(s));
      begin = i + 1;
    }
  }
  return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void for_each_row(const std::string& path, const std::vector<std::string>& expected_header,
                  const std::function<void(const Row&)>& on_row) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n_data = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (!have_header) {
      if (fields != expected_header) {
        std::string want;
        for (const auto& c : expected_header) want += (want.empty() ? "" : ",") + c;
        fail(path, lineno, "bad header, expected '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size())
      fail(path, lineno,
           "expected " + std::to_string(expected_header.size()) + " fields, got " +
               std::to_string(fields.size()));
    on_row(Row{std::move(fields), lineno});
    ++n_data;
  }
  if (!have_header) throw std::runtime_error(path + ": empty file, missing header");
  if (n_data == 0) throw std::runtime_error(path + ": no data rows");
}

double parse_double(const std::string& field, std::size_t line, const std::string& col) {
  auto v = parse_double_opt(field, line, col);
  if (!v) fail("line", line, "missing value in column '" + col + "'");
  return *v;
}

std::optional<double> parse_double_opt(const std::string& field, std::size_t line,
                                       const std::string& col) {
  if (field.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size())
    throw std::runtime_error("line " + std::to_string(line) + ": column '" + col +
                             "': not a number: '" + field + "'");
  return v;
}

long parse_long(const std::string& field, std::size_t line, const std::string& col) {
  long v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size())
    throw std::runtime_error("line " + std::to_string(line) + ": column '" + col +
                             "': not an integer: '" + field + "'");
  return v;
}

Writer::Writer(const std::string& path) : path_(path) {
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_)
    throw std::runtime_error("cannot write '" + path + "': " + std::strerror(errno));
}

Writer::~Writer() {
  if (f_) std::fclose(f_);
}

void Writer::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", cols[i].c_str());
  std::fputc('\n', f_);
}

Writer& Writer::field(const std::string& s) {
  if (row_open_) std::fputc(',', f_);
  std::fputs(s.c_str(), f_);
  row_open_ = true;
  return *this;
}

Writer& Writer::field(double v) { return field(format_double(v)); }

Writer& Writer::field(long v) { return field(std::to_string(v)); }

Writer& Writer::blank_field() { return field(std::string{}); }

void Writer::end_row() {
  std::fputc('\n', f_);
  row_open_ = false;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace pvfc::csv

#include "ddmm/io.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <sstream>

namespace ddmm {

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::column_required(const std::string& name, const std::string& file) const {
  const int c = column(name);
  if (c < 0) throw ParseError(file + ": missing column '" + name + "'");
  return c;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    std::string tok = line.substr(start, comma == std::string::npos ? comma : comma - start);
    const auto a = tok.find_first_not_of(" \t\r");
    if (a == std::string::npos)
      tok.clear();
    else {
      const auto b = tok.find_last_not_of(" \t\r");
      tok = tok.substr(a, b - a + 1);
    }
    out.push_back(tok);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string k = line.substr(1, eq - 1), v = line.substr(eq + 1);
        auto trim = [](std::string& s) {
          const auto a = s.find_first_not_of(" \t");
          const auto b = s.find_last_not_of(" \t");
          s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(k);
        trim(v);
        t.meta[k] = v;
      }
      continue;
    }
    auto toks = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(toks);
      continue;
    }
    if (toks.size() != t.header.size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.header.size()) + " fields, got " +
                       std::to_string(toks.size()));
    std::vector<double> row(toks.size());
    for (size_t c = 0; c < toks.size(); ++c) {
      const std::string& s = toks[c];
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError(path + ": empty file");
  t.data.resize(static_cast<long>(rows.size()), static_cast<long>(t.header.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) t.data(r, c) = rows[r][c];
  return t;
}

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw Error("cannot write '" + path + "'");
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  out_ << "# " << key << " = " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
  out_ << "\n";
}

void CsvWriter::field(double v) {
  if (row_started_) out_ << ",";
  out_ << format_double(v);
  row_started_ = true;
}

void CsvWriter::field(long v) {
  if (row_started_) out_ << ",";
  out_ << v;
  row_started_ = true;
}

void CsvWriter::field(const std::string& s) {
  if (row_started_) out_ << ",";
  out_ << s;
  row_started_ = true;
}

void CsvWriter::end_row() {
  out_ << "\n";
  row_started_ = false;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error("cannot create directory '" + path + "': " + ec.message());
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

}  // namespace ddmm

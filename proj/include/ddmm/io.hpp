#ifndef DDMM_IO_HPP
#define DDMM_IO_HPP

#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ddmm/errors.hpp"

namespace ddmm {

/// Numeric CSV with a header row. Lines starting with '#' carry metadata as
/// `# key = value` and are exposed separately.
class CsvTable {
 public:
  std::vector<std::string> header;
  Eigen::MatrixXd data;
  std::map<std::string, std::string> meta;

  int rows() const { return static_cast<int>(data.rows()); }
  int columns() const { return static_cast<int>(data.cols()); }
  double value(int r, int c) const { return data(r, c); }
  int column(const std::string& name) const;  // -1 if absent
  int column_required(const std::string& name, const std::string& file) const;
};

CsvTable read_csv(const std::string& path);

/// Streams CSV rows with locale-independent, round-trip-exact doubles.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void comment(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& names);
  void field(double v);
  void field(long v);
  void field(int v) { field(static_cast<long>(v)); }
  void field(const std::string& s);
  void end_row();

 private:
  std::ofstream out_;
  bool row_started_ = false;
  std::string path_;
};

std::string format_double(double v);

void ensure_directory(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace ddmm

#endif

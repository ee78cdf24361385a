#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace erlq {

// Comma-separated output with a header row; doubles carry 17 significant
// digits so they read back bit-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string> header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
    columns_ = header.size();
  }

  CsvWriter& operator<<(double v) { return cell(format(v)); }
  CsvWriter& operator<<(long v) { return cell(std::to_string(v)); }
  CsvWriter& operator<<(int v) { return cell(std::to_string(v)); }
  CsvWriter& operator<<(const std::string& v) { return cell(v); }
  CsvWriter& operator<<(const char* v) { return cell(v); }

  static std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
  }

 private:
  CsvWriter& cell(const std::string& s) {
    out_ << (filled_ == 0 ? "" : ",") << s;
    if (++filled_ == columns_) {
      out_ << '\n';
      filled_ = 0;
    }
    return *this;
  }

  std::ofstream out_;
  std::size_t columns_ = 0, filled_ = 0;
};

}  // namespace erlq

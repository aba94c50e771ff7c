// csv.hpp — RFC-4180-style CSV emission with round-trip-exact doubles
#pragma once

#include <csp/types.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace csp {

// Scientific notation, 17 significant digits: exact round trip for IEEE doubles.
inline std::string csv_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

inline std::string csv_int(long value) { return std::to_string(value); }

inline std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char ch : cell) {
    quoted += ch;
    if (ch == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

// Streams rows with CRLF terminators; byte-identical across runs for equal inputs.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << csv_quote(cells[i]);
    }
    out_ << "\r\n";
  }

 private:
  std::ostream& out_;
};

// Owns an output stream: file in binary mode when `path` is nonempty, else stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("OutputTarget: cannot open '" + path + "'");
    }
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void finish() {
    if (file_) {
      file_->flush();
      if (!*file_) throw std::runtime_error("OutputTarget: write failure");
    } else {
      std::cout.flush();
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace csp

#pragma once

#include <stdexcept>
#include <string>

namespace morphdis {

// Error in a data file or text stream. what() includes file:line when known.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg, std::string file = {}, long line = 0)
      : std::runtime_error(decorate(msg, file, line)),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  static std::string decorate(const std::string& msg, const std::string& file, long line) {
    if (file.empty()) return msg;
    std::string out = file;
    if (line > 0) {
      out += ':';
      out += std::to_string(line);
    }
    out += ": ";
    out += msg;
    return out;
  }

  std::string file_;
  long line_;
};

}  // namespace morphdis

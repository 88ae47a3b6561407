#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace levygen::cli {

/// Shortest round-trip text for a double, locale independent.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// CSV with a header row, '\n' line ends and '.' decimals.
class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { line(header); }

  Csv& cell(double v) { return put(fmt(v)); }
  Csv& cell(long v) { return put(std::to_string(v)); }
  Csv& cell(int v) { return put(std::to_string(v)); }
  Csv& cell(bool v) { return put(v ? "1" : "0"); }
  Csv& cell(const std::string& s) { return put(quote(s)); }
  Csv& cell(const char* s) { return put(quote(s)); }
  void end() {
    text_ += '\n';
    open_ = 0;
  }
  const std::string& text() const { return text_; }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  Csv& put(const std::string& s) {
    if (open_++) text_ += ',';
    text_ += s;
    return *this;
  }
  void line(const std::vector<std::string>& cells) {
    for (const auto& c : cells) put(quote(c));
    end();
  }

  std::size_t open_ = 0;
  std::string text_;
};

}  // namespace levygen::cli

#pragma once

#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace svmpool::cli {

// Shortest decimal form that round-trips to the same double.
std::string fmt(double v);

// Line-oriented key=value writer. Matrices are written one row per key.
class KeyValueWriter {
 public:
  void comment(std::string_view text);
  void put(std::string_view key, std::string_view value);
  void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }
  void put(std::string_view key, double value);
  void put(std::string_view key, int value);
  void put(std::string_view key, std::size_t value);
  void put(std::string_view key, bool value);
  void put_list(std::string_view key, std::span<const double> values);
  void put_list(std::string_view key, std::span<const int> values);
  void blank();

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace svmpool::cli

#include "report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace svmpool::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void KeyValueWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void KeyValueWriter::put(std::string_view key, std::string_view value) { out_ << key << '=' << value << '\n'; }

void KeyValueWriter::put(std::string_view key, double value) { put(key, std::string_view(fmt(value))); }

void KeyValueWriter::put(std::string_view key, int value) { out_ << key << '=' << value << '\n'; }

void KeyValueWriter::put(std::string_view key, std::size_t value) { out_ << key << '=' << value << '\n'; }

void KeyValueWriter::put(std::string_view key, bool value) { put(key, value ? "true" : "false"); }

void KeyValueWriter::put_list(std::string_view key, std::span<const double> values) {
  out_ << key << '=';
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt(values[i]);
  out_ << '\n';
}

void KeyValueWriter::put_list(std::string_view key, std::span<const int> values) {
  out_ << key << '=';
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
  out_ << '\n';
}

void KeyValueWriter::blank() { out_ << '\n'; }

}  // namespace svmpool::cli

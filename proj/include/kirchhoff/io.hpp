#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kirchhoff::io {

/// Locale-independent "%.17g".
std::string format_double(double value);

/// Write through a temporary sibling file and rename over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

/// Minimal streaming JSON writer. Numbers are printed with 17 significant
/// digits so output is reproducible byte for byte. Non-finite numbers are
/// written as null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& values(const std::vector<double>& vs);

  template <typename T>
  JsonWriter& field(std::string_view name, const T& v) {
    key(name);
    return value(v);
  }

  const std::string& str() const noexcept { return out_; }

 private:
  void separate();
  void write_string(std::string_view v);
  void indent();

  std::string out_;
  std::vector<bool> first_;  // per open container: no element written yet
  bool after_key_ = false;
};

}  // namespace kirchhoff::io

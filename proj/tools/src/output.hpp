#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pcfpair::cli {

/// Identifies the inputs of a run; stamped on every output file.
struct Provenance {
  std::string tool_version;
  std::string config_path;
  std::string config_sha1;  // git blob hash of the config file bytes
  std::string command;      // subcommand plus its flags, as typed
};

/// SHA-1 of "blob <size>\0<bytes>", as `git hash-object` prints it.
std::string git_blob_sha1(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Provenance& prov);

  void header(std::initializer_list<std::string_view> names);
  void row(const std::vector<std::string>& fields);

  template <typename... Ts>
  void values(const Ts&... vs) {
    row({cell(vs)...});
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(unsigned long v) { return std::to_string(v); }
  static std::string cell(unsigned long long v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream out_;
  std::filesystem::path path_;
};

/// RFC 4180 quoting: fields containing a comma, quote or line break are quoted.
std::string csv_field(std::string_view field);

nlohmann::ordered_json provenance_json(const Provenance& prov);

/// Writes `doc` with a leading "provenance" member, two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const Provenance& prov, nlohmann::ordered_json doc);

}  // namespace pcfpair::cli

#include "output.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <array>
#include <sstream>
#include <stdexcept>

#include "pcfpair/errors.hpp"

namespace pcfpair::cli {

std::string git_blob_sha1(std::string_view bytes) {
  const std::string prefix = "blob " + std::to_string(bytes.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, prefix.data(), prefix.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  for (unsigned int k = 0; k < length; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string format_number(double value) { return fmt::format("{}", value); }

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const Provenance& prov) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << "# pcfpair " << prov.tool_version << " config-sha1 " << prov.config_sha1 << '\n';
}

void CsvWriter::header(std::initializer_list<std::string_view> names) {
  std::vector<std::string> fields(names.begin(), names.end());
  row(fields);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out_ << ',';
    out_ << csv_field(fields[k]);
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

nlohmann::ordered_json provenance_json(const Provenance& prov) {
  return {{"tool", "pcfpair"},
          {"version", prov.tool_version},
          {"config", prov.config_path},
          {"config_sha1", prov.config_sha1},
          {"command", prov.command}};
}

void write_json(const std::filesystem::path& path, const Provenance& prov, nlohmann::ordered_json doc) {
  nlohmann::ordered_json full;
  full["provenance"] = provenance_json(prov);
  for (auto& [key, value] : doc.items()) full[key] = value;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << full.dump(2) << '\n';
}

}  // namespace pcfpair::cli

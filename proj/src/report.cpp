#include "subcocycle/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <sstream>

#include "subcocycle/errors.hpp"

#ifndef SUBCOCYCLE_VERSION
#define SUBCOCYCLE_VERSION "0.0.0"
#endif

namespace subcocycle::report {

std::string tool_version() { return SUBCOCYCLE_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

Json make_document(const std::string& command, const std::string& input_path, std::string_view input_bytes,
                   Json config) {
  Json doc;
  doc["tool"] = "subcocycle";
  doc["version"] = tool_version();
  doc["command"] = command;
  doc["input"] = {{"path", input_path}, {"sha256", sha256_hex(input_bytes)}, {"bytes", input_bytes.size()}};
  doc["config"] = std::move(config);
  doc["status"] = "ok";
  doc["warnings"] = Json::array();
  doc["result"] = Json::object();
  return doc;
}

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void csv_row(std::ostringstream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ",";
    out << csv_field(fields[i]);
  }
  out << "\n";
}

}  // namespace

std::string emit_report(const Report& report, Format format) {
  if (format == Format::structured) return report.document.dump(2) + "\n";
  if (!report.table) return "";
  std::ostringstream out;
  csv_row(out, report.table->columns);
  for (const auto& row : report.table->rows) csv_row(out, row);
  return out.str();
}

Json rate_json(const AlgebraicGrowthRate& rate) {
  return {{"product", rate.product().get_str()},
          {"length", rate.length()},
          {"exact", rate.exact_string()},
          {"approx", rate.approx()},
          {"display", rate.display_string()}};
}

Json nodes_json(const std::vector<NodeId>& nodes) {
  Json out = Json::array();
  for (NodeId n : nodes) out.push_back(n);
  return out;
}

std::string point_string(const riemann::ProjectivePoint& point) { return point.to_string(); }

}  // namespace subcocycle::report

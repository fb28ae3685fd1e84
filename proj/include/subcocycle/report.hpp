#pragma once

// Report documents: an ordered key-value tree for the structured format and
// an optional flat table for CSV. Serialization is deterministic, so equal
// inputs and settings give byte-identical output.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "subcocycle/growth_rate.hpp"
#include "subcocycle/model.hpp"
#include "subcocycle/riemann.hpp"

namespace subcocycle::report {

using Json = nlohmann::ordered_json;

enum class Format { structured, csv };

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  Json document;
  std::optional<CsvTable> table;
};

std::string tool_version();

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// Common header: tool, version, command, input path and digest, settings.
// "status", "warnings" and "result" are appended in that order.
Json make_document(const std::string& command, const std::string& input_path, std::string_view input_bytes,
                   Json config);

// Structured output ends with a newline; CSV output is RFC 4180 with a header
// row, or empty when the report has no table.
std::string emit_report(const Report& report, Format format);

// {"product": "p/q", "length": L, "exact": "(p/q)^(1/L)", "approx": x, "display": "..."}.
Json rate_json(const AlgebraicGrowthRate& rate);
Json nodes_json(const std::vector<NodeId>& nodes);
std::string point_string(const riemann::ProjectivePoint& point);

}  // namespace subcocycle::report

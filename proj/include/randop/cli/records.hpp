#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "randop/cli/config.hpp"

namespace randop::cli {

inline constexpr const char* kSchemaTag = "randop.result/1";

// Records are flat ordered objects: schema, experiment, record, seed, the
// metric fields, verdict, config, duration_s.
using Record = Json;

// 17 significant digits; non-finite values have no JSON form and become null.
std::string format_number(double x);
// Compact JSON with numbers through format_number.
std::string to_json(const Json& value);

void write_json_lines(std::ostream& out, const std::vector<Record>& records);
// Header is the union of record keys in first-seen order; nested values are
// written as compact JSON in a quoted cell.
void write_csv(std::ostream& out, const std::vector<Record>& records);
void write_records(std::ostream& out, const std::vector<Record>& records, Format format);

// The metric fields of a record: everything but config and duration_s.
Json metric_fields(const Record& record);

}  // namespace randop::cli

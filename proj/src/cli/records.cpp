#include "randop/cli/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace randop::cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json(const Json& value) {
  switch (value.type()) {
    case Json::value_t::number_float:
      return format_number(value.get<double>());
    case Json::value_t::array: {
      std::string s = "[";
      for (std::size_t i = 0; i < value.size(); ++i) s += (i ? "," : "") + to_json(value[i]);
      return s + "]";
    }
    case Json::value_t::object: {
      std::string s = "{";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        s += (first ? "" : ",") + Json(it.key()).dump() + ":" + to_json(it.value());
        first = false;
      }
      return s + "}";
    }
    default:
      return value.dump();
  }
}

void write_json_lines(std::ostream& out, const std::vector<Record>& records) {
  for (const auto& r : records) out << to_json(r) << '\n';
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_number_float()) {
    const double x = v.get<double>();
    return std::isfinite(x) ? format_number(x) : "";
  }
  return csv_quote(to_json(v));
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<Record>& records) {
  std::vector<std::string> header;
  for (const auto& r : records)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(header.begin(), header.end(), it.key()) == header.end()) header.push_back(it.key());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_quote(header[i]);
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      const auto it = r.find(header[i]);
      if (it != r.end()) out << csv_cell(*it);
    }
    out << '\n';
  }
}

void write_records(std::ostream& out, const std::vector<Record>& records, Format format) {
  if (format == Format::csv)
    write_csv(out, records);
  else
    write_json_lines(out, records);
}

Json metric_fields(const Record& record) {
  Json m = record;
  m.erase("config");
  m.erase("duration_s");
  return m;
}

}  // namespace randop::cli

#include "polite/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace polite {

nlohmann::json ExperimentResult::to_json() const {
  return {{"schema", kSchemaVersion}, {"name", name},          {"parameters", parameters},
          {"values", values},         {"tolerances", tolerances}, {"pass", pass}};
}

bool all_finite(const nlohmann::json& doc) {
  if (doc.is_number_float()) return std::isfinite(doc.get<double>());
  if (doc.is_structured()) {
    for (const auto& v : doc) {
      if (!all_finite(v)) return false;
    }
  }
  return true;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep a marker so the value reads back as a double.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

void write(std::ostringstream& out, const nlohmann::json& doc, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (doc.type()) {
    case nlohmann::json::value_t::object: {
      if (doc.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << nlohmann::json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, level + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (doc.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : doc) flat = flat && !v.is_structured();
      out << '[';
      bool first = true;
      for (const auto& v : doc) {
        if (!first) out << (flat ? ", " : ",");
        if (!flat) out << nl << pad;
        first = false;
        write(out, v, indent, level + 1);
      }
      if (!flat) out << nl << close_pad;
      out << ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out << format_double(doc.get<double>());
      return;
    default:
      out << doc.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc, int indent) {
  std::ostringstream out;
  write(out, doc, indent, 0);
  return out.str();
}

}  // namespace polite

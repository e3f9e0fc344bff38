#pragma once

// Experiment results and their deterministic JSON rendering.

#include <json.hpp>
#include <string>

namespace polite {

inline constexpr int kSchemaVersion = 1;

struct ExperimentResult {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json values = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  bool pass = false;

  /// Top-level document with "schema": 1.
  nlohmann::json to_json() const;
};

/// Every number in the document is finite.
bool all_finite(const nlohmann::json& doc);

/// Compact-ish rendering with sorted keys, two-space indentation and doubles
/// printed with 17 significant digits; non-finite doubles become null.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

/// Shortest text for a double that still round-trips: %.17g.
std::string format_double(double x);

}  // namespace polite

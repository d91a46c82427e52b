#pragma once

#include <json.hpp>

#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/engine.hpp"
#include "rasesim/error.hpp"
#include "rasesim/ga.hpp"
#include "rasesim/solver.hpp"
#include "rasesim/telemetry.hpp"
#include "rasesim/topology.hpp"

namespace rasesim::json_io {

using Json = nlohmann::json;

/// Parses text into JSON; throws ParseError naming `what`.
Json parse(std::string_view text, std::string_view what);

/// Reads fields of one JSON object and rejects keys that were never read.
/// Errors are ParseError with a dotted path to the offending element.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  bool has(std::string_view key) const;
  const Json& raw(std::string_view key);
  const std::string& path() const { return path_; }
  std::string child(std::string_view key) const { return path_ + "." + std::string{key}; }

  template <class T>
  T required(std::string_view key) {
    if (!has(key)) fail(child(key), "missing required field");
    return convert<T>(raw(key), child(key));
  }

  template <class T>
  T optional(std::string_view key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(raw(key), child(key));
  }

  /// Throws ParseError listing the first unknown key.
  void finish() const;

  template <class T>
  static T convert(const Json& value, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) fail(path, "expected boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) fail(path, "expected integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (value.is_number_unsigned()) return value.get<T>();
        if (value.get<long long>() < 0) fail(path, "expected non-negative integer");
      }
      return value.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) fail(path, "expected number");
      return value.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) fail(path, "expected string");
      return value.get<std::string>();
    } else {
      static_assert(std::is_same_v<T, std::vector<std::string>>, "unsupported field type");
      if (!value.is_array()) fail(path, "expected array of strings");
      T out;
      for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(convert<std::string>(value[i], path + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& detail);

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string, std::less<>> consumed_;
};

NetworkSpec network_from_json(const Json& j, const std::string& path = "network");
Json to_json(const NetworkSpec& spec);

std::vector<VnfDescriptor> vnfs_from_json(const Json& j, const std::string& path = "catalog");
Json to_json(const Catalog& catalog);

TrafficPattern traffic_from_json(const Json& j, const std::string& path);
Json to_json(const TrafficPattern& traffic);
SfcRequest sfcr_from_json(const Json& j, const std::string& path);
Json to_json(const SfcRequest& sfcr);
/// Accepts either `{"sfcrs": [...]}` or a bare array.
std::vector<SfcRequest> sfcrs_from_json(const Json& j, const std::string& path = "sfcrs");

EngineConfig engine_from_json(const Json& j, EngineConfig defaults, const std::string& path = "engine");
Json to_json(const EngineConfig& cfg);

GaParams ga_from_json(const Json& j, const std::string& path = "solver.ga");
Json to_json(const GaParams& params);

Json to_json(const Fitness& fitness);
Fitness fitness_from_json(const Json& j, const std::string& path);

Json to_json(const TelemetryFrame& frame);
TelemetryFrame frame_from_json(const Json& j, const std::string& path);

/// Optional doubles map to null.
Json optional_number(const std::optional<double>& value);
std::optional<double> optional_number_from_json(const Json& j, const std::string& path);

}  // namespace rasesim::json_io

#include "rasesim/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rasesim/error.hpp"

namespace rasesim {

LatencyHistogram bin_latencies(std::span<const TelemetryFrame> frames, std::string_view sfc_id,
                               double bin_width_ms) {
  if (!(bin_width_ms > 0)) throw Error(Errc::InvalidParams, "bin_width", "must be positive");
  LatencyHistogram hist;
  hist.bin_width_ms = bin_width_ms;
  if (frames.empty()) return hist;

  std::map<long long, std::size_t> counts;
  bool seen = false;
  const std::string key{sfc_id};
  for (const auto& frame : frames) {
    const auto it = frame.sfc_latency_ms.find(key);
    if (it == frame.sfc_latency_ms.end()) continue;
    seen = true;
    ++counts[static_cast<long long>(std::floor(it->second / bin_width_ms))];
    ++hist.total;
  }
  if (!seen) throw Error(Errc::UnknownSfc, key);
  for (const auto& [k, n] : counts) hist.bins.push_back({static_cast<double>(k) * bin_width_ms, n});
  return hist;
}

std::vector<SeriesPoint> cpu_series(std::span<const TelemetryFrame> frames, std::string_view host_id) {
  std::vector<SeriesPoint> series;
  series.reserve(frames.size());
  const std::string key{host_id};
  for (const auto& frame : frames) {
    const auto it = frame.host_cpu.find(key);
    if (it == frame.host_cpu.end()) continue;
    series.push_back({frame.timestamp_s, it->second});
  }
  if (series.empty() && !frames.empty()) throw Error(Errc::UnknownHost, key);
  return series;
}

double mean_latency(std::span<const TelemetryFrame> frames, std::span<const std::string> accepted_ids) {
  std::vector<double> samples;
  for (const auto& frame : frames) {
    for (const auto& id : accepted_ids) {
      const auto it = frame.sfc_latency_ms.find(id);
      if (it != frame.sfc_latency_ms.end()) samples.push_back(it->second);
    }
  }
  if (samples.empty()) throw Error(Errc::NoSamples, "latency");
  std::sort(samples.begin(), samples.end());
  double sum = 0.0;
  for (double s : samples) sum += s;
  return sum / static_cast<double>(samples.size());
}

std::vector<std::string> sfc_ids(std::span<const TelemetryFrame> frames) {
  std::set<std::string> ids;
  for (const auto& frame : frames) {
    for (const auto& [id, _] : frame.sfc_latency_ms) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

}  // namespace rasesim

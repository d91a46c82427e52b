#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rasesim {

/// One sampling tick of the simulated substrate.
struct TelemetryFrame {
  double timestamp_s = 0.0;
  std::map<std::string, double> host_cpu;        // utilization in [0, 1]
  std::map<std::string, double> link_bw_mbps;    // used, both directions
  std::map<std::string, double> sfc_latency_ms;  // accepted chains only

  friend bool operator==(const TelemetryFrame&, const TelemetryFrame&) = default;
};

struct HistogramBin {
  double lower_ms = 0.0;
  std::size_t count = 0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Non-empty bins only, ascending; bin k covers [k*w, (k+1)*w).
struct LatencyHistogram {
  double bin_width_ms = 0.0;
  std::vector<HistogramBin> bins;
  std::size_t total = 0;

  friend bool operator==(const LatencyHistogram&, const LatencyHistogram&) = default;
};

/// Throws InvalidParams for bin_width <= 0 and UnknownSfc when frames exist
/// but none carries the chain.
LatencyHistogram bin_latencies(std::span<const TelemetryFrame> frames, std::string_view sfc_id,
                               double bin_width_ms);

struct SeriesPoint {
  double timestamp_s = 0.0;
  double value = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// Throws UnknownHost when frames exist but none reports the host.
std::vector<SeriesPoint> cpu_series(std::span<const TelemetryFrame> frames, std::string_view host_id);

/// Mean over every (frame, accepted chain) latency sample. Samples are
/// summed in sorted order so the result does not depend on frame order.
/// Throws NoSamples.
double mean_latency(std::span<const TelemetryFrame> frames, std::span<const std::string> accepted_ids);

/// Ids of every chain with at least one latency sample, sorted.
std::vector<std::string> sfc_ids(std::span<const TelemetryFrame> frames);

}  // namespace rasesim

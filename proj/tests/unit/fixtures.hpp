#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/error.hpp"
#include "rasesim/topology.hpp"

namespace fixtures {

inline std::filesystem::path scenario(const std::string& name) {
  return std::filesystem::path{RASESIM_SCENARIO_DIR} / name;
}

// tg and server hang off one switch; every compute host has its own link.
inline rasesim::NetworkSpec star(int hosts, int cpus, double host_delay_ms = 1.0, double bw = 1000.0) {
  rasesim::NetworkSpec spec;
  spec.hosts.push_back({"tg", 1, 1024});
  for (int i = 1; i <= hosts; ++i) spec.hosts.push_back({"h" + std::to_string(i), cpus, 4096});
  spec.hosts.push_back({"server", 1, 1024});
  spec.switches = {"s"};
  for (const auto& h : spec.hosts) spec.links.push_back({"", h.id, "s", bw, h.id.front() == 'h' ? host_delay_ms : 0.5});
  spec.ingress_node = "tg";
  spec.egress_host = "server";
  return spec;
}

inline rasesim::SfcRequest request(std::string id, std::vector<std::string> chain, double rps,
                                   double bandwidth = 5.0, double size_bits = 80000.0) {
  return {std::move(id), std::move(chain), bandwidth, size_bits, rasesim::TrafficPattern::constant(rps, 60.0)};
}

// Runs f and returns the error code it throws.
template <class F>
std::optional<rasesim::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const rasesim::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures

namespace fixtures {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("rasesim-" + name + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& child) const { return path_ / child; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in{p, std::ios::binary};
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out{p, std::ios::binary | std::ios::trunc};
  out << text;
}

inline std::size_t file_count(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) return 0;
  std::size_t n = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) n += e.is_regular_file() ? 1 : 0;
  return n;
}

}  // namespace fixtures

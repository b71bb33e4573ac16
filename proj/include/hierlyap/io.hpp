#pragma once

// Network configuration files, reports and trajectory CSV.
//
// A configuration is one JSON document (1-based indices throughout):
//
//   {
//     "version": 1,
//     "seed": 42,                                  (optional)
//     "subsystems": [
//       { "A": [[-10]], "B": [1], "C": [1],
//         "f": [ {"coeff": 0.9, "exponents": [2], "out": 1} ],   ("out" optional)
//         "x_star": [0], "d": 6, "P": [[0.5]] }                  ("P" optional)
//     ],
//     "couplings": [
//       { "from": 2, "to": 1, "bound": 1.9, "self": false,       ("self" optional)
//         "form": {"const": 0.7}
//               | {"sin": {"amp": 1.9, "sub": 1, "comp": 1, "phase": 0}}
//               | {"cos": {...}} }
//     ],
//     "initial_state": [ ... ]                     (optional)
//   }
//
// Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hierlyap/certify.hpp"
#include "hierlyap/errors.hpp"
#include "hierlyap/model.hpp"
#include "hierlyap/simulate.hpp"

namespace hierlyap::io {

class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

inline constexpr int kConfigVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct NetworkConfig {
  int version = kConfigVersion;
  std::optional<std::uint64_t> seed;
  model::Network network;
  std::optional<Vector> initial_state;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Model-level validation failures are reported as ParseError too, with the
/// JSON location of the offending entry when it can be pinned down.
NetworkConfig parse_config(std::string_view text, const std::string& source = "<config>");
NetworkConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const NetworkConfig& cfg);
std::string dump_config(const NetworkConfig& cfg);

/// Sampling seed: HIERLYAP_SEED if set, else the config's seed, else 42.
std::uint64_t effective_seed(const NetworkConfig& cfg);

/// Either an inline list ("0.1,0.2" or "[0.1, 0.2]") or a path to a file
/// holding a JSON array.
Vector parse_state_argument(const std::string& arg);

struct ReportOptions {
  bool include_timing = false;
};

/// Stable key order; identical input gives identical bytes unless timing is included.
nlohmann::ordered_json make_report(const certify::Assessment& a, const ReportOptions& options = {});
std::string dump_report(const nlohmann::ordered_json& report);

/// Header t,x_1,...,x_N[,V]; "\n" line endings; 17 significant digits.
std::string trajectory_csv(const simulate::Trajectory& traj);

}  // namespace hierlyap::io

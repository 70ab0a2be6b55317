#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcorr {

inline constexpr const char* kToolVersion = "0.1.0";

/// Run configuration echoed into every report so a run can be replayed from
/// the report alone.
struct RunConfig {
  std::uint64_t seed = 0;
  int samples = 0;
  std::string measure;
  std::optional<double> tolerance_override;
  std::string output_path;
  enum class Format { Json, Csv } format = Format::Json;
};

/// Report envelope: {tool_version, command, seed, tolerances, optimizer,
/// conventions, payload}, doubles printed with 17 significant digits.
void write_report(const nlohmann::ordered_json& payload, const RunConfig& config,
                  const std::string& command);

/// Entry point behind the binary. Exit codes: 0 on PASS/success, 1 on a
/// failed expectation, 2 on usage or input errors.
int dispatch(const std::vector<std::string>& argv);

}  // namespace qcorr

#pragma once
// The aggregate suite behind `coend verify-all`.

#include <cstddef>
#include <cstdint>

#include "coend/report.hpp"

namespace coend {

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::size_t cap = 3;         // carriers |X| <= cap for the tensor lemma checks
  std::size_t n_max = 3;       // arities for rigidity, encoding and analyzer checks
  std::size_t samples = 1000;  // per sampled check
  Execution execution = Execution::Parallel;

  nlohmann::json to_json() const;
};

/// Runs every check section in a fixed order; a section that throws becomes a
/// single FAIL entry "<section>/error". Timing per section goes to
/// Report::timing only, so to_json(false) depends on the config alone.
Report verify_all(const VerifyConfig& config);

}  // namespace coend

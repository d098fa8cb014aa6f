#pragma once

// The verification experiment behind `wavedof verify`: enumerate the basis,
// build a quadrature grid, take the Gram spectrum of the modes and the
// covariance spectrum of a random plane-wave ensemble, and compare their
// effective ranks with the exact mode count.

#include <cstdint>
#include <optional>
#include <string>

#include "wavedof/cli/output.hpp"
#include "wavedof/config.hpp"
#include "wavedof/rankcheck.hpp"

namespace wavedof::cli {

struct VerifyOptions {
  Dimension dim = Dimension::TwoD;
  PhysicalConfig cfg;
  int waves = 8;          // plane waves per ensemble member
  int ensemble = 0;       // members; 0 picks max(16, 4 * exact count)
  std::uint64_t seed = 1;
  std::optional<rankcheck::GridResolution> resolution;  // unset: minimum_resolution
  rankcheck::RankPolicy policy;
  bool full_orders = false;
  std::int64_t cap = 4000;  // dense Gram matrices above this size are refused
};

struct VerifyResult {
  ordered_json report;
  rankcheck::SpectrumReport gram;
  rankcheck::SpectrumReport ensemble;
  std::int64_t exact = 0;
};

/// Throws ConfigError, CapExceeded or ResolutionError.
VerifyResult run_verify(const VerifyOptions& options, RunMetadata md);

/// CSV with columns index,eigenvalue,cumulative_fraction.
CsvTable spectrum_table(const rankcheck::SpectrumReport& spectrum, const RunMetadata& md);

}  // namespace wavedof::cli

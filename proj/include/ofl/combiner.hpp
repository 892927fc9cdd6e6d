#pragma once

// MIN(A0, A1): follows one of two online algorithms at a time under a doubling
// budget 2^ell, paying the facility cost the other algorithm accumulated since
// it was last followed whenever it switches. Cost is at most 13 times the
// cheaper of the two.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ofl/offline.hpp"
#include "ofl/online.hpp"

namespace ofl {

/// One record per demand.
struct CombinerStep {
  std::size_t demand_index = 0;
  int followed = 0;               // algorithm charged for this demand
  double charged = 0.0;           // its incremental cost on this demand
  double switch_payment = 0.0;    // paid after the demand, 0 if no switch
  int switches = 0;               // switches triggered after the demand
  int ell = 0;                    // exponent after the demand
};

struct CombinerResult {
  RunResult result;                       // algorithm = "min(a,b)", total = ledger
  std::array<RunResult, 2> shadows;       // standalone-equivalent runs of A0 and A1
  std::array<std::uint64_t, 2> shadow_seeds{};
  std::vector<CombinerStep> steps;
  double charged_total = 0.0;
  double switch_total = 0.0;
  int final_ell = 0;
};

/// Seed of shadow `index` (0 or 1) inside a MIN run with `seed`. A standalone
/// run() with this seed is bit-identical to the shadow.
std::uint64_t shadow_seed(std::uint64_t seed, int index) noexcept;

CombinerResult min_combine(const Instance& instance, std::span<const Location> predictions, Algorithm a,
                           Algorithm b, std::uint64_t seed, const RunOptions& options = {});

}  // namespace ofl

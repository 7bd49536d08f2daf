#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rindler/frames.hpp"

namespace rindler {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using ShiftFunction = std::function<RindlerEvent(const RindlerEvent&, const FrameSpec&)>;

/// Random events and frames (c = 1, g in [0.5, 2], b in [0, 0.5]): shifting
/// then mapping with the effective acceleration must reproduce (cT, X - b)
/// to 1e-12. `shift` is injectable so the check itself can be mutation-tested.
CheckResult check_shifted_frame_consistency(const ShiftFunction& shift = shift_rindler,
                                            int samples = 1000, unsigned seed = 7);
CheckResult check_frame_roundtrip(int samples = 1000, unsigned seed = 11);
CheckResult check_redshift_law();
CheckResult check_expansion_order(int states = 100, unsigned seed = 3);
CheckResult check_equilibrium_closed_form();
CheckResult check_drift_response();
CheckResult check_symplectic_quality();
CheckResult check_visibility_oracle(int draws = 100, unsigned seed = 5);
CheckResult check_clock_at_rest();

/// Every check above, in order.
std::vector<CheckResult> run_selfcheck();

/// Prints one aligned PASS/FAIL line per check; returns true iff all passed.
bool print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace rindler

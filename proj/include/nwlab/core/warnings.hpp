#pragma once

#include <string>
#include <vector>

namespace nwlab::core::warnings {

/// Thread-local, non-fatal diagnostics channel. Operations that assume
/// negligible boundary amplitude (FFT-based transforms, periodic
/// derivatives) report here instead of throwing.
void emit(const std::string& message);

/// Returns and clears the pending warnings of this thread.
std::vector<std::string> drain();

bool empty();

/// Edge-density guard shared by the periodic-convention operations:
/// warns when max(rho[0], rho[n-1]) > threshold * max(rho).
void check_edge_decay(const std::vector<double>& density, const char* op_name,
                      double threshold = 1e-8);

}  // namespace nwlab::core::warnings

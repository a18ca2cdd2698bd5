#include "nwlab/core/warnings.hpp"

#include <algorithm>
#include <sstream>

namespace nwlab::core::warnings {

namespace {
thread_local std::vector<std::string> pending;
}

void emit(const std::string& message) { pending.push_back(message); }

std::vector<std::string> drain() {
    std::vector<std::string> out;
    out.swap(pending);
    return out;
}

bool empty() { return pending.empty(); }

void check_edge_decay(const std::vector<double>& density, const char* op_name,
                      double threshold) {
    if (density.empty()) return;
    const double peak = *std::max_element(density.begin(), density.end());
    if (peak <= 0.0) return;
    const double edge = std::max(density.front(), density.back());
    if (edge > threshold * peak) {
        std::ostringstream os;
        os << op_name << ": edge density " << edge / peak
           << " of peak exceeds " << threshold
           << "; widen the grid for periodic-convention accuracy";
        emit(os.str());
    }
}

}  // namespace nwlab::core::warnings

#pragma once

#include <stdexcept>

namespace nwlab::schrodinger {

/// The sign choice of the dynamics postulate: +1 selects the reversible
/// (hyperbolic, Schrodinger) branch, -1 the irreversible (parabolic)
/// one.
class BranchParameter {
public:
    explicit BranchParameter(int lambda) : lambda_(lambda) {
        if (lambda != 1 && lambda != -1)
            throw std::invalid_argument("BranchParameter: lambda must be +1 or -1");
    }

    static BranchParameter hyperbolic() { return BranchParameter(1); }
    static BranchParameter parabolic() { return BranchParameter(-1); }

    int lambda() const { return lambda_; }

private:
    int lambda_;
};

}  // namespace nwlab::schrodinger

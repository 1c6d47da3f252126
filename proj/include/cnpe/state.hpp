#pragma once

#include "cnpe/sparse.hpp"

namespace cnpe {

/// Coefficient vector of a discrete field in S_h at a fixed range value.
struct StateVector {
    ComplexVector coeffs;
    double r = 0.0;

    int size() const { return static_cast<int>(coeffs.size()); }
};

} // namespace cnpe

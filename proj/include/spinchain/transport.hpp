#pragma once

#include <vector>

#include "spinchain/propagator.hpp"
#include "spinchain/trace.hpp"

namespace spinchain {

/// Tr[U(t) rho0 U(t)^dagger O] / ref on `times`, ref from normalization_reference.
SignalTrace dense_transport(const Operator& rho0, const Operator& obs, const Propagator& h,
                            const std::vector<double>& times);

}  // namespace spinchain

#include "spinchain/transport.hpp"

#include "spinchain/errors.hpp"

namespace spinchain {

SignalTrace dense_transport(const Operator& rho0, const Operator& obs, const Propagator& h,
                            const std::vector<double>& times) {
  const double ref = normalization_reference(rho0, obs);
  if (ref == 0.0) throw NumericalError("transport normalisation is zero");
  const auto raw = h.expectation_sweep(rho0, obs, times);
  SignalTrace tr;
  tr.times = times;
  for (const auto& v : raw) tr.values.push_back(v.real() / ref);
  tr.meta = {{"source", "dense"}, {"hamiltonian", to_string(h.kind())}, {"normalization", ref}};
  return tr;
}

}  // namespace spinchain

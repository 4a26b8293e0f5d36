#pragma once

#include "swt/harness.hpp"

namespace swt {

/// Random kernel pair with the given atom count: masses in [0.1, 1.1],
/// values in [-2, 2] with at least one atom where both kernels are nonzero.
KernelPair random_kernel_pair(double alpha, std::size_t atoms, Xoshiro256pp& rng);

/// max over `pairs` random pairs and the three envelope bounds of the
/// |U| / bound ratio on a grid x grid lattice over [-5, 5]^2.
double envelope_ratio_sweep(const std::vector<double>& alphas, std::size_t pairs,
                            std::size_t atoms, std::size_t grid, RngStream stream);

/// Worst relative error between the closed-form derivatives of U and
/// Richardson-extrapolated central differences at `points` random
/// non-singular evaluation points.
double derivative_check_sweep(const std::vector<double>& alphas, std::size_t points,
                              RngStream stream);

/// Worst relative drift of the five dependence quantities under random
/// representation transforms.
double invariance_sweep(std::size_t transforms, RngStream stream);

/// Full deterministic property suite (envelope bounds, derivatives,
/// representation invariance, inequality spot checks, weight identities).
McReport run_selfcheck(RngStream stream);

} // namespace swt

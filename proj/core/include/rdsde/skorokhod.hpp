#pragma once

#include "rdsde/path.hpp"

namespace rdsde {

/// Componentwise Skorokhod problem on the non-negative orthant:
/// x = z + y, x >= 0, y non-decreasing from 0, y increasing only where x = 0.
struct SkorokhodSolution {
    SamplePath z;  ///< free path
    SamplePath x;  ///< reflected path
    SamplePath y;  ///< regulator
};

/// y^i(t) = max_{s <= t} (z^i(s))^-, one forward pass per component.
/// Throws PreconditionError when z(0) has a negative component.
SamplePath regulator(const SamplePath& z);

/// x = z + regulator(z).
SkorokhodSolution reflect(const SamplePath& z);

/// Max over components of sum_k x^i(t_k) (y^i(t_{k+1}) - y^i(t_k)); zero in the
/// continuum, O(mesh) on a grid.
double complementarity_residual(const SkorokhodSolution& sol);

struct LipschitzWitness {
    double ratio_x = 0.0;
    double ratio_y = 0.0;
};

/// Sup-norm ratios ||x1-x2|| / ||z1-z2|| and ||y1-y2|| / ||z1-z2||; both 0 when z1 = z2.
LipschitzWitness lipschitz_witness(const SamplePath& z1, const SamplePath& z2);

}  // namespace rdsde

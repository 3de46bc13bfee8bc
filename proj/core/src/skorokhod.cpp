#include "rdsde/skorokhod.hpp"

#include <algorithm>
#include <string>

#include "rdsde/error.hpp"

namespace rdsde {

SamplePath regulator(const SamplePath& z) {
    for (std::size_t i = 0; i < z.dim(); ++i) {
        if (z(0, i) < 0.0) {
            throw PreconditionError("Skorokhod problem needs z(0) >= 0; component " + std::to_string(i + 1) +
                                    " starts at " + std::to_string(z(0, i)));
        }
    }
    SamplePath y(z.grid(), z.dim());
    for (std::size_t i = 0; i < z.dim(); ++i) {
        double running = 0.0;
        for (std::size_t k = 0; k < z.n_points(); ++k) {
            running = std::max(running, -z(k, i));
            y(k, i) = running;
        }
    }
    return y;
}

SkorokhodSolution reflect(const SamplePath& z) {
    SamplePath y = regulator(z);
    SamplePath x(z.grid(), z.dim());
    auto xv = x.values();
    auto yv = y.values();
    auto zv = z.values();
    for (std::size_t j = 0; j < xv.size(); ++j) {
        xv[j] = zv[j] + yv[j];
    }
    return {z, std::move(x), std::move(y)};
}

double complementarity_residual(const SkorokhodSolution& sol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.x.dim(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < sol.x.n_points(); ++k) {
            acc += sol.x(k, i) * (sol.y(k + 1, i) - sol.y(k, i));
        }
        worst = std::max(worst, acc);
    }
    return worst;
}

LipschitzWitness lipschitz_witness(const SamplePath& z1, const SamplePath& z2) {
    if (!z1.grid().matches(z2.grid()) || z1.dim() != z2.dim()) {
        throw ShapeError("Lipschitz witness needs paths on the same grid");
    }
    const double dz = sup_distance(z1, z2);
    if (dz == 0.0) {
        return {};
    }
    const SkorokhodSolution a = reflect(z1);
    const SkorokhodSolution b = reflect(z2);
    return {sup_distance(a.x, b.x) / dz, sup_distance(a.y, b.y) / dz};
}

}  // namespace rdsde

#pragma once

#include <string>
#include <vector>

#include "rdsde/coeff.hpp"
#include "rdsde/solver.hpp"

namespace rdsde::testing {

// x = r + int xd ds + int (a xd + b) dg + y,  eta(u) = u + r
inline Problem linear_example(double a, double b, double r = 1.0, std::size_t intervals = 2, double hurst = 0.75) {
    const ParamMap params{{"a", a}, {"b", b}, {"r", r}};
    const std::vector<std::string> drift{"xd1"};
    const std::vector<std::string> diffusion{"a*xd1 + b"};
    Problem p;
    p.coeffs = CoefficientSet::parse(drift, diffusion, params, 1, 1).bind();
    p.eta = [r](double u, std::span<double> out) { out[0] = u + r; };
    p.r = r;
    p.horizon = r * static_cast<double>(intervals);
    p.hurst = hurst;
    return p;
}

// x = int cos(x) ds + int sin(s + xd) dg + y,  eta(u) = u^2
inline Problem nonlinear_example(double r = 1.0, std::size_t intervals = 2, double hurst = 0.75) {
    const ParamMap params{{"r", r}};
    const std::vector<std::string> drift{"cos(x1)"};
    const std::vector<std::string> diffusion{"sin(t + xd1)"};
    Problem p;
    p.coeffs = CoefficientSet::parse(drift, diffusion, params, 1, 1).bind();
    p.eta = [](double u, std::span<double> out) { out[0] = u * u; };
    p.r = r;
    p.horizon = r * static_cast<double>(intervals);
    p.hurst = hurst;
    return p;
}

// Constant drift and diffusion in every component.
inline Problem constant_problem(std::size_t d, double drift, double sigma, double eta, double r = 1.0,
                                std::size_t intervals = 1) {
    Problem p;
    p.coeffs.d = d;
    p.coeffs.m = 1;
    p.coeffs.drift = [drift](double, const PathHistory&, std::span<double> out) {
        for (auto& v : out) {
            v = drift;
        }
    };
    p.coeffs.diffusion = [sigma](double, std::span<const double>, std::span<double> out) {
        for (auto& v : out) {
            v = sigma;
        }
    };
    p.eta = [eta](double, std::span<double> out) {
        for (auto& v : out) {
            v = eta;
        }
    };
    p.r = r;
    p.horizon = r * static_cast<double>(intervals);
    return p;
}

inline SamplePath make_path(const TimeGrid& grid, double (*f)(double)) {
    SamplePath p(grid, 1);
    for (std::size_t k = 0; k < grid.n_points(); ++k) {
        p(k, 0) = f(grid.time(k));
    }
    return p;
}

}  // namespace rdsde::testing

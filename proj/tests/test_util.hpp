#pragma once

// Shared helpers for the unit tests: deterministic random fields and small
// comparison utilities.

#include <cmath>
#include <functional>

#include "fsi/rng.hpp"
#include "fsi/torus_field.hpp"
#include "fsi/torus_spectral.hpp"

namespace fsi::test {

/// Fill a field from a pointwise function f(x, y, component).
inline TorusField make_field(const Grid2d& g, int ncomp,
                             const std::function<double(double, double, int)>& fn) {
    TorusField f(g, ncomp);
    for (int c = 0; c < ncomp; ++c)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                f.at(c, iy, ix) = fn(g.x(ix), g.y(iy), c);
    return f;
}

/// Random band-limited real field: coefficients drawn per mode with
/// max(|kx|,|ky|) <= kmax, scaled by `amp`.
inline TorusField make_random_field(const Grid2d& g, int ncomp, uint64_t seed,
                                    int kmax, double amp) {
    SpectralCoeffs c(g, ncomp);
    uint64_t idx = 0;
    for (int comp = 0; comp < ncomp; ++comp)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                const int ky = std::abs(g.ky_signed(iky));
                const double re = rng_sym(seed, idx++);
                const double im = rng_sym(seed, idx++);
                if (ikx <= kmax && ky <= kmax)
                    c.at(comp, iky, ikx) = amp * std::complex<double>(re, im);
            }
    enforce_conjugate_symmetry(c);
    return to_physical(c);
}

inline double max_abs_diff(const TorusField& a, const TorusField& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

inline double max_abs(const TorusField& a) {
    double worst = 0.0;
    for (double v : a.data) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace fsi::test

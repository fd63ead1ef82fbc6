#include "fsi/torus_field.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/fft.hpp"

namespace fsi {

SpectralCoeffs to_spectral(const TorusField& f) {
    SpectralCoeffs c(f.grid, f.ncomp);
    for (int comp = 0; comp < f.ncomp; ++comp)
        fft_forward_plane(f.grid, f.plane(comp), c.plane(comp));
    return c;
}

TorusField to_physical(const SpectralCoeffs& c) {
    TorusField f(c.grid, c.ncomp);
    for (int comp = 0; comp < c.ncomp; ++comp)
        fft_backward_plane(c.grid, c.plane(comp), f.plane(comp));
    return f;
}

namespace {

// Columns whose conjugate partner lives in the same column: kx = 0 always,
// kx = nx/2 when nx is even.
bool self_paired_column(const Grid2d& g, int ikx) {
    return ikx == 0 || (g.nx % 2 == 0 && ikx == g.nx / 2);
}

}  // namespace

void enforce_conjugate_symmetry(SpectralCoeffs& c) {
    const Grid2d& g = c.grid;
    for (int comp = 0; comp < c.ncomp; ++comp) {
        for (int ikx = 0; ikx < g.nkx(); ++ikx) {
            if (!self_paired_column(g, ikx)) continue;
            // Row 0 and (even ny) row ny/2 pair with themselves: force real.
            c.at(comp, 0, ikx) = {c.at(comp, 0, ikx).real(), 0.0};
            if (g.ny % 2 == 0) {
                auto& v = c.at(comp, g.ny / 2, ikx);
                v = {v.real(), 0.0};
            }
            for (int iky = 1; iky < (g.ny + 1) / 2; ++iky) {
                auto a = c.at(comp, iky, ikx);
                auto b = c.at(comp, g.ny - iky, ikx);
                auto avg = 0.5 * (a + std::conj(b));
                c.at(comp, iky, ikx) = avg;
                c.at(comp, g.ny - iky, ikx) = std::conj(avg);
            }
        }
    }
}

double conjugate_symmetry_defect(const SpectralCoeffs& c) {
    const Grid2d& g = c.grid;
    double worst = 0.0;
    for (int comp = 0; comp < c.ncomp; ++comp) {
        for (int ikx = 0; ikx < g.nkx(); ++ikx) {
            if (!self_paired_column(g, ikx)) continue;
            worst = std::max(worst, std::abs(c.at(comp, 0, ikx).imag()));
            if (g.ny % 2 == 0)
                worst = std::max(worst, std::abs(c.at(comp, g.ny / 2, ikx).imag()));
            for (int iky = 1; iky < (g.ny + 1) / 2; ++iky) {
                auto d = c.at(comp, iky, ikx) - std::conj(c.at(comp, g.ny - iky, ikx));
                worst = std::max(worst, std::abs(d));
            }
        }
    }
    return worst;
}

}  // namespace fsi

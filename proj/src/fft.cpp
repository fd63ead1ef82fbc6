#include "fsi/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace fsi {
namespace {

struct PlanSet {
    Grid2d grid;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;

    explicit PlanSet(const Grid2d& g) : grid(g) {
        real_buf = fftw_alloc_real(static_cast<size_t>(g.nx) * g.ny);
        spec_buf = fftw_alloc_complex(static_cast<size_t>(g.ny) * g.nkx());
        // Row-major (n0, n1) = (ny, nx): x is the fastest (transformed-last)
        // dimension, so the half-spectrum is along kx.
        fwd = fftw_plan_dft_r2c_2d(g.ny, g.nx, real_buf, spec_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(g.ny, g.nx, spec_buf, real_buf, FFTW_ESTIMATE);
        if (!fwd || !bwd)
            throw std::runtime_error("fft: plan creation failed");
    }
    ~PlanSet() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(spec_buf);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
};

std::mutex g_mutex;
std::map<std::pair<int, int>, std::unique_ptr<PlanSet>>& cache() {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> c;
    return c;
}

PlanSet& plans_for(const Grid2d& g) {
    auto key = std::make_pair(g.nx, g.ny);
    auto& c = cache();
    auto it = c.find(key);
    if (it == c.end())
        it = c.emplace(key, std::make_unique<PlanSet>(g)).first;
    return *it->second;
}

}  // namespace

void fft_forward_plane(const Grid2d& g, const double* real_in,
                       std::complex<double>* spec_out) {
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanSet& p = plans_for(g);
    std::memcpy(p.real_buf, real_in, sizeof(double) * g.size());
    fftw_execute(p.fwd);
    const double scale = 1.0 / g.size();
    const int nk = g.ny * g.nkx();
    for (int i = 0; i < nk; ++i)
        spec_out[i] = scale * std::complex<double>(p.spec_buf[i][0], p.spec_buf[i][1]);
}

void fft_backward_plane(const Grid2d& g, const std::complex<double>* spec_in,
                        double* real_out) {
    std::lock_guard<std::mutex> lock(g_mutex);
    PlanSet& p = plans_for(g);
    const int nk = g.ny * g.nkx();
    for (int i = 0; i < nk; ++i) {
        p.spec_buf[i][0] = spec_in[i].real();
        p.spec_buf[i][1] = spec_in[i].imag();
    }
    fftw_execute(p.bwd);
    std::memcpy(real_out, p.real_buf, sizeof(double) * g.size());
}

}  // namespace fsi

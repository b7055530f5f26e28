#include "fourier.hpp"

#include <mutex>
#include <stdexcept>

namespace semigrav::dynamics {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }
}  // namespace

FourierPlan::FourierPlan(std::size_t n, int rank) : size_(rank == 2 ? n * n : n) {
    std::vector<cplx> a(size_), b(size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int ni = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());  // the FFTW planner is not thread-safe
    if (rank == 2) {
        fwd_ = fftw_plan_dft_2d(ni, ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_2d(ni, ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    } else {
        fwd_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_1d(ni, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    }
    if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
}

FourierPlan::~FourierPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
}

void FourierPlan::forward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    out.resize(size_);
    fftw_execute_dft(fwd_, as_fftw(in.data()), as_fftw(out.data()));
}

void FourierPlan::backward(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    out.resize(size_);
    fftw_execute_dft(bwd_, as_fftw(in.data()), as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& v : out) v *= scale;
}

void spectral_derivative(const FourierPlan& plan, const std::vector<double>& k, const std::vector<cplx>& spectrum,
                         int axis, int order, std::vector<cplx>& out, std::vector<cplx>& scratch) {
    const std::size_t n = k.size();
    scratch.resize(n * n);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double kk = axis == 1 ? k[i1] : k[i2];
            cplx factor{1.0, 0.0};
            for (int o = 0; o < order; ++o) factor *= cplx{0.0, kk};
            // The Nyquist mode of an odd derivative has no real counterpart.
            if (order % 2 == 1 && (axis == 1 ? i1 : i2) == n / 2) factor = 0.0;
            scratch[i1 + n * i2] = factor * spectrum[i1 + n * i2];
        }
    plan.backward(scratch, out);
}

}  // namespace semigrav::dynamics

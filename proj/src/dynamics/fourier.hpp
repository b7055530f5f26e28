#pragma once

#include "semigrav/dynamics/grid.hpp"

#include <fftw3.h>

#include <vector>

namespace semigrav::dynamics {

/// Owns forward/backward FFTW plans for n x n (2D) or n (1D) complex arrays.
/// Transforms accept any std::complex<double> buffer of the planned size; backward is normalized.
class FourierPlan {
public:
    FourierPlan(std::size_t n, int rank);
    ~FourierPlan();
    FourierPlan(const FourierPlan&) = delete;
    FourierPlan& operator=(const FourierPlan&) = delete;

    void forward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
    void backward(const std::vector<cplx>& in, std::vector<cplx>& out) const;
    std::size_t size() const { return size_; }

private:
    std::size_t size_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

/// Spectral derivative of a 2D field along axis 1 or 2, given its transform.
void spectral_derivative(const FourierPlan& plan, const std::vector<double>& k, const std::vector<cplx>& spectrum,
                         int axis, int order, std::vector<cplx>& out, std::vector<cplx>& scratch);

}  // namespace semigrav::dynamics

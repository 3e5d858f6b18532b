// metrics.hpp - Density matrices, partial traces and coherence observables

#pragma once

#include "sdfs/fock.hpp"

#include <vector>

namespace sdfs {

// Operator on a tensor product of local spaces, ranked like NetworkSpec
// (subsystem 0 most significant).
class DensityMatrix {
public:
    DensityMatrix(std::vector<std::size_t> local_dims, CMatrix rho);

    const std::vector<std::size_t>& local_dims() const noexcept { return dims_; }
    const CMatrix& matrix() const noexcept { return rho_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }

    std::size_t rank(const Occupations& occ) const;
    Complex element(const Occupations& row, const Occupations& col) const;

    Complex trace() const { return rho_.trace(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

    // Hermitian, unit trace and positive semidefinite within tol.
    bool is_physical(double tol = 1e-10) const;

    DensityMatrix operator+(const DensityMatrix& other) const;
    DensityMatrix operator*(double s) const;

private:
    std::vector<std::size_t> dims_;
    CMatrix rho_;
};

// |psi><psi|; throws std::invalid_argument unless ||psi|| = 1 within 1e-10.
DensityMatrix density_from_state(const StateVector& state);

// Traces out every subsystem not listed in keep. keep must be non-empty,
// strictly ascending and in range.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

struct CoherencePair {
    Occupations ket_a;
    Occupations ket_b;
};

// |rho_ab|
double coherence(const DensityMatrix& reduced, const CoherencePair& pair);

// arg(amp_b) - arg(amp_a), wrapped to (-pi, pi]. Throws std::domain_error when
// either amplitude is below 1e-12 in magnitude.
double relative_phase(const StateVector& state, const CoherencePair& pair);

// arg(rho_ba): the same angle read off a (possibly reduced) density matrix.
double relative_phase(const DensityMatrix& rho, const CoherencePair& pair);

double wrap_phase(double angle);

}  // namespace sdfs

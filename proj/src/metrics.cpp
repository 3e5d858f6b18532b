// metrics.cpp

#include "sdfs/metrics.hpp"

#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sdfs {

namespace {
constexpr double kVanishing = 1e-12;
}

DensityMatrix::DensityMatrix(std::vector<std::size_t> local_dims, CMatrix rho)
    : dims_(std::move(local_dims)), rho_(std::move(rho)) {
    const std::size_t total = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    if (dims_.empty() || rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != total)
        throw std::invalid_argument("DensityMatrix: shape does not match local dimensions");
}

std::size_t DensityMatrix::rank(const Occupations& occ) const {
    if (occ.size() != dims_.size()) throw std::invalid_argument("DensityMatrix: ket has the wrong number of sites");
    std::size_t r = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] < 0 || static_cast<std::size_t>(occ[i]) >= dims_[i])
            throw std::out_of_range("DensityMatrix: ket " + to_string(occ) + " out of range");
        r = r * dims_[i] + static_cast<std::size_t>(occ[i]);
    }
    return r;
}

Complex DensityMatrix::element(const Occupations& row, const Occupations& col) const {
    return rho_(static_cast<Eigen::Index>(rank(row)), static_cast<Eigen::Index>(rank(col)));
}

bool DensityMatrix::is_physical(double tol) const {
    if (hermiticity_defect(rho_) > tol) return false;
    if (std::abs(trace() - Complex{1.0}) > tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

DensityMatrix DensityMatrix::operator+(const DensityMatrix& other) const {
    if (dims_ != other.dims_) throw std::invalid_argument("DensityMatrix: dimension mismatch");
    return DensityMatrix(dims_, rho_ + other.rho_);
}

DensityMatrix DensityMatrix::operator*(double s) const { return DensityMatrix(dims_, rho_ * s); }

DensityMatrix density_from_state(const StateVector& state) {
    if (std::abs(state.norm() - 1.0) > 1e-10) throw std::invalid_argument("density_from_state: state is not normalized");
    std::vector<std::size_t> dims;
    for (const auto& m : state.spec().modes()) dims.push_back(m.local_dim());
    const CVector& a = state.amplitudes();
    return DensityMatrix(std::move(dims), a * a.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const auto& dims = rho.local_dims();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= dims.size()) throw std::invalid_argument("partial_trace: site out of range");
        if (i > 0 && keep[i] <= keep[i - 1]) throw std::invalid_argument("partial_trace: keep must be strictly ascending");
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;

    std::vector<std::size_t> kept_dims;
    std::size_t kept_total = 1, traced_total = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (kept[i]) {
            kept_dims.push_back(dims[i]);
            kept_total *= dims[i];
        } else {
            traced_total *= dims[i];
        }
    }

    // full index -> (kept rank, traced rank), grouped by traced rank
    std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups(traced_total);
    const std::size_t total = rho.dim();
    for (std::size_t full = 0; full < total; ++full) {
        std::size_t rem = full, stride = total, k = 0, t = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            stride /= dims[i];
            const std::size_t digit = rem / stride;
            rem %= stride;
            if (kept[i]) k = k * dims[i] + digit;
            else t = t * dims[i] + digit;
        }
        groups[t].emplace_back(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(k));
    }

    const auto kd = static_cast<Eigen::Index>(kept_total);
    CMatrix out = CMatrix::Zero(kd, kd);
    const CMatrix& m = rho.matrix();
    for (const auto& g : groups)
        for (const auto& [fi, ki] : g)
            for (const auto& [fj, kj] : g) out(ki, kj) += m(fi, fj);
    return DensityMatrix(std::move(kept_dims), std::move(out));
}

double coherence(const DensityMatrix& reduced, const CoherencePair& pair) {
    if (pair.ket_a == pair.ket_b) throw std::invalid_argument("coherence: pair kets must differ");
    return std::abs(reduced.element(pair.ket_a, pair.ket_b));
}

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(angle, two_pi);
    if (w <= -std::numbers::pi) w += two_pi;
    return w;
}

double relative_phase(const StateVector& state, const CoherencePair& pair) {
    const Complex a = state.amplitude(pair.ket_a);
    const Complex b = state.amplitude(pair.ket_b);
    if (std::abs(a) < kVanishing || std::abs(b) < kVanishing)
        throw std::domain_error("relative_phase: a component amplitude vanishes");
    return wrap_phase(std::arg(b) - std::arg(a));
}

double relative_phase(const DensityMatrix& rho, const CoherencePair& pair) {
    const Complex ba = rho.element(pair.ket_b, pair.ket_a);
    if (std::abs(ba) < kVanishing * kVanishing) throw std::domain_error("relative_phase: coherence vanishes");
    return wrap_phase(std::arg(ba));
}

}  // namespace sdfs

// hamiltonians.hpp - Builders for oscillator-network, dephasing and boson-fermion Hamiltonians
//
// Units: hbar = 2 throughout, so every (hbar/2) prefactor is 1.

#pragma once

#include "sdfs/fock.hpp"

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sdfs {

inline constexpr double kHbar = 2.0;

// N x N Hermitian coefficient matrix omega_ij. Hermiticity is enforced on
// construction (tolerance 1e-12).
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(CMatrix entries);

    static CouplingMatrix zero(std::size_t n);

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix& matrix() const noexcept { return entries_; }
    Complex operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    friend bool operator==(const CouplingMatrix& a, const CouplingMatrix& b) { return a.entries_ == b.entries_; }

private:
    CMatrix entries_;
};

using HamiltonianSum = OperatorSum;

// Network sites addressed by a coupling matrix; empty means 0..n-1.
using SiteMap = std::vector<std::size_t>;

struct NetworkOptions {
    // Adds the +1 (bosons) / -1 (fermions) ground offsets weighted by omega_ii.
    bool include_ground_offset = false;
};

// sum_ij omega_ij b_i+ b_j over bosonic sites.
HamiltonianSum build_boson_network(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites = {},
                                   NetworkOptions opts = {});

// sum_ij omega_ij f_i+ f_j: the ladder-operator form that a spin network does
// not reduce to. Used for fermionic quasi-particle networks.
HamiltonianSum build_fermion_network_ladder(const NetworkSpec& spec, const CouplingMatrix& coupling,
                                            SiteMap sites = {}, NetworkOptions opts = {});

// Per-link Pauli axis for the spin form; links absent from the map use Z.
using LinkAxes = std::map<std::pair<std::size_t, std::size_t>, PauliAxis>;

// sum_ij omega_ij s_i s_j with s = sigma/2 on the link's axis. Off-diagonal
// couplings must be real (same-axis products are symmetric in i, j).
HamiltonianSum build_fermion_network_spin(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites = {},
                                          const LinkAxes& axes = {});

struct DephasingLink {
    std::size_t system_site{0};
    std::size_t env_site{0};
    double weight{0.0};
    PauliAxis axis{PauliAxis::Z};
};

// System-environment sigma (x) sigma couplings only; no intra-system or
// intra-environment terms.
HamiltonianSum build_dephasing_interaction(const NetworkSpec& spec, std::span<const DephasingLink> links);

// weights(s, e) couples system_sites[s] to env_sites[e] on env_axes[e].
HamiltonianSum build_dephasing_interaction(const NetworkSpec& spec, std::span<const std::size_t> system_sites,
                                           std::span<const std::size_t> env_sites, const Eigen::MatrixXd& weights,
                                           std::span<const PauliAxis> env_axes);

// Same weight from each environment spin to every system spin.
std::vector<DephasingLink> collective_links(std::span<const std::size_t> system_sites,
                                            std::span<const std::size_t> env_sites, std::span<const double> env_weights,
                                            std::span<const PauliAxis> env_axes);

struct MixedPair {
    std::size_t boson_site{0};
    std::size_t fermion_site{0};
    Complex weight{0.0};
};

// sum omega b_i+ f_j + conj(omega) b_i f_j+
HamiltonianSum build_mixed_interaction(const NetworkSpec& spec, std::span<const MixedPair> pairs);

// Free oscillators omega_i (n_i +/- 1): +1 for bosons, -1 for fermions when the
// ground offset is on.
HamiltonianSum build_free_oscillators(const NetworkSpec& spec, std::span<const std::size_t> sites,
                                      std::span<const double> omegas, NetworkOptions opts = {});

// The sigma_i sigma_j product rewritten in number operators:
// n_i n_j - (n_i + n_j)/2 + 1/4.
HamiltonianSum sigma_product_ladder_expansion(std::size_t i, std::size_t j);

}  // namespace sdfs

// quasiparticle.hpp - Number-conserving (simplified Bogoliubov) diagonalization of
// quadratic networks and the induced change of Fock basis.
//
// For H = b+ W b with W = U diag(Omega) U+, the quasi operators are q = U+ b,
// i.e. q_k+ = sum_i U_ik b_i+ and b_i+ = sum_k conj(U_ik) q_k+. Quasi mode k
// is stored at network site sites[k], so a transformed state lives on a network
// of the same shape (boson cutoffs may change, see TransformOptions).

#pragma once

#include "sdfs/fock.hpp"
#include "sdfs/hamiltonians.hpp"

#include <optional>
#include <vector>

namespace sdfs {

struct QuasiBasis {
    CMatrix u;                       // columns are quasi modes in original-site coordinates
    Eigen::VectorXd omega;           // ascending quasi frequencies
    std::vector<std::size_t> sites;  // network sites spanned by this block

    std::size_t size() const noexcept { return static_cast<std::size_t>(omega.size()); }
};

struct BlockQuasiBasis {
    QuasiBasis boson;
    QuasiBasis fermion;
};

// Eigen-decomposition with ascending Omega. Each column's largest-magnitude
// component (lowest index on ties) is made real positive; degenerate columns are
// ordered by that index.
QuasiBasis diagonalize_coupling(const CouplingMatrix& coupling, SiteMap sites = {});
QuasiBasis diagonalize_coupling(const CMatrix& coupling, SiteMap sites = {});

// Independent diagonalization per species. Default layout: bosons on sites
// 0..Nb-1, fermions on Nb..Nb+Nf-1.
BlockQuasiBasis block_diagonalize(const CouplingMatrix& boson_coupling, const CouplingMatrix& fermion_coupling,
                                  SiteMap boson_sites = {}, SiteMap fermion_sites = {});

// One or more disjoint blocks acting together on a network.
class ModeTransform {
public:
    ModeTransform(const QuasiBasis& basis);        // NOLINT(google-explicit-constructor)
    ModeTransform(const BlockQuasiBasis& basis);   // NOLINT(google-explicit-constructor)
    explicit ModeTransform(std::vector<QuasiBasis> blocks);

    const std::vector<QuasiBasis>& blocks() const noexcept { return blocks_; }

    // Sum over blocks of Omega_k n_{sites[k]}.
    double quasi_energy(const Occupations& occ) const;

private:
    std::vector<QuasiBasis> blocks_;
};

enum class Direction { ToQuasi, FromQuasi };

struct TransformOptions {
    FermionRep rep = FermionRep::StringCorrected;
    // Kets with more than two excitations inside the blocks need this flag: the
    // expansion grows combinatorially with the excitation number.
    bool allow_multi_excitation = false;
    // Network for the result. When absent, block bosons get the smallest uniform
    // cutoff M' whose discarded norm stays below leakage_tol.
    std::optional<NetworkSpec> target;
    double leakage_tol = 1e-8;
    bool throw_on_leakage = true;
};

struct TransformResult {
    StateVector state;
    int boson_cutoff{0};  // M' actually used for block bosons (0 when there are none)
    double leakage{0.0};  // norm discarded by the target truncation
};

TransformResult transform_state(const StateVector& state, const ModeTransform& basis, Direction dir,
                                const TransformOptions& opts = {});

class TransformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Residual checks used by tests and the verify suite.
double unitarity_defect(const QuasiBasis& basis);
double diagonalization_residual(const QuasiBasis& basis, const CouplingMatrix& coupling);

}  // namespace sdfs

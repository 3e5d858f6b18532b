// susy.hpp - Supercharges, supersymmetric Hamiltonians and boson-fermion qubits
//
// Layout of a SUSY network: N bosons (sites 0..N-1) followed by N fermions
// (sites N..2N-1). With hbar = 2 the supercharge carries no sqrt(hbar/2) factor
// and H_SUSY = (hbar/2) Q^2 = Q^2.

#pragma once

#include "sdfs/evolution.hpp"
#include "sdfs/fock.hpp"
#include "sdfs/hamiltonians.hpp"

#include <span>
#include <string>
#include <vector>

namespace sdfs {

struct SusyNetworkSpec {
    std::size_t n_pairs{1};
    int boson_cutoff{2};  // 2 keeps Q^2 on occupation <= 1 states clear of the truncation
    int pairing_offset{0};

    NetworkSpec network() const;
    std::size_t boson_site(std::size_t i) const { return i; }
    std::size_t fermion_site(std::size_t i) const { return n_pairs + i; }
    // fermion partnered with boson i under offset n (indices mod N)
    std::size_t partner(std::size_t i, int offset) const;
};

enum class QubitSign { Plus, Minus };

struct SusyQubit {
    QubitSign sign{QubitSign::Plus};
    std::size_t boson_site{0};
    std::size_t fermion_site{1};
};

// Q_n = sum_i w_i b_i+ f_{i+n} + conj(w_i) b_i f_{i+n}+. The operator sum is
// representation-agnostic; the fermion representation enters at materialization.
OperatorSum build_supercharge(const SusyNetworkSpec& spec, int offset, std::span<const Complex> weights);

// (hbar/2) Q^2
OperatorSum susy_hamiltonian(const OperatorSum& q);

// Sum_i |w_i|^2 (b_i+ b_i + f_i+ f_i) in units of hbar/2: the free-oscillator
// form the supercharge square is compared against.
OperatorSum nicolai_reference(const SusyNetworkSpec& spec, std::span<const Complex> weights);

// (|0_B 1_F> +/- |1_B 0_F>)/sqrt(2) built as (f+ +/- b+)/sqrt(2) on the vacuum;
// every other mode stays empty.
StateVector build_dfs_state(const SusyQubit& qubit, const NetworkSpec& spec,
                            FermionRep rep = FermionRep::StringCorrected);

// (|1_B 0_F>, |0_B 1_F>) over the reduced (boson, fermion) pair, in ascending
// site order.
CoherencePair qubit_pair(const SusyQubit& qubit);

struct QubitSample {
    double time{0.0};
    double phase_boson{0.0};     // arg of the |1_B 0_F> amplitude (env vacuum)
    double phase_fermion{0.0};   // arg of the |0_B 1_F> amplitude (env vacuum)
    double relative_phase{0.0};  // wrapped to (-pi, pi]
    double coherence{0.0};       // |rho_ab| of the reduced pair
    double pair_population{0.0}; // rho_aa + rho_bb
    double leakage{0.0};
};

// Block-diagonalize, move the Plus/Minus qubit to the quasi basis, propagate,
// return. Boson sites 0..N-1 and fermion sites N..2N-1 are coupled by the two
// matrices; the qubit's sites pick the system pair.
std::vector<QubitSample> susy_qubit_evolution(const SusyQubit& qubit, const CouplingMatrix& boson_coupling,
                                              const CouplingMatrix& fermion_coupling, const TimeGrid& grid,
                                              int boson_cutoff = 2);

// The same pipeline through the dense oracle of the block Hamiltonian.
std::vector<QubitSample> susy_qubit_evolution_dense(const SusyQubit& qubit, const CouplingMatrix& boson_coupling,
                                                    const CouplingMatrix& fermion_coupling, const TimeGrid& grid,
                                                    int boson_cutoff = 2);

// Unwraps a sequence of wrapped phases.
std::vector<double> unwrap_phases(std::span<const double> wrapped);

struct NicolaiRow {
    int offset{0};
    FermionRep rep{FermionRep::StringCorrected};
    double delta{0.0};  // max |(hbar/2)Q_n^2 - reference| on the protected subspace
    std::size_t protected_dim{0};
};

// Every boson occupation strictly below the cutoff: Q^2 never touches the
// truncation there.
std::vector<std::size_t> protected_subspace(const NetworkSpec& spec);

std::vector<NicolaiRow> verify_susy_algebra(const SusyNetworkSpec& spec, std::span<const int> offsets,
                                            std::span<const Complex> weights, std::span<const FermionRep> reps);

std::string to_string(FermionRep rep);

}  // namespace sdfs

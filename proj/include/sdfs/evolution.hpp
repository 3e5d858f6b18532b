// evolution.hpp - Exact quasi-basis propagation, the dense matrix-exponential
// oracle and the stochastic phase-kick ensemble.
//
// Sign convention: every engine applies exp(-i H t / hbar) with hbar = 2, so a
// quasi ket |n'> picks up exp(-i t/2 sum_k n'_k Omega_k).

#pragma once

#include "sdfs/fock.hpp"
#include "sdfs/hamiltonians.hpp"
#include "sdfs/metrics.hpp"
#include "sdfs/quasiparticle.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sdfs {

inline constexpr double kLeakageTol = 1e-8;

struct TimeGrid {
    std::vector<double> times;

    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> t);  // strictly ascending, non-negative

    static TimeGrid linspace(double start, double stop, std::size_t count);
    std::size_t size() const noexcept { return times.size(); }
};

// --------------------------- quasi engine ------------------------------------

// Multiplies every ket of a state already in the quasi basis by its phase.
StateVector propagate_quasi(const StateVector& quasi_state, const ModeTransform& basis, double t);

// Single-excitation amplitudes c_i (one per block site): U e^{-i Omega t/2} U+ c.
// Cost is polynomial in the block size.
CVector propagate_single_excitation(const QuasiBasis& basis, const CVector& amplitudes, double t);

// --------------------------- dense oracle ------------------------------------

// Largest total_dim the dense engine materializes. SUSY_DFS_DENSE_GUARD overrides
// the default of 4096.
std::size_t dense_guard();

// exp(-i H t/2) via the eigendecomposition of the materialized Hamiltonian.
class DensePropagator {
public:
    DensePropagator(const NetworkSpec& spec, const HamiltonianSum& h, FermionRep rep);
    explicit DensePropagator(const NetworkSpec& spec, const CMatrix& h);

    StateVector apply(const StateVector& state, double t) const;
    CMatrix unitary(double t) const;

    const NetworkSpec& spec() const noexcept { return spec_; }
    const CMatrix& hamiltonian() const noexcept { return h_; }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

private:
    NetworkSpec spec_;
    CMatrix h_;
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

StateVector propagate_dense(const StateVector& state, const HamiltonianSum& h, double t,
                            FermionRep rep = FermionRep::StringCorrected);

// --------------------------- engines over a grid -----------------------------

struct Snapshot {
    double time{0.0};
    StateVector state;
    double leakage{0.0};
};

class Evolver {
public:
    virtual ~Evolver() = default;
    virtual Snapshot at(double t) const = 0;
    virtual std::string tag() const = 0;
};

class DenseEvolver final : public Evolver {
public:
    DenseEvolver(StateVector initial, HamiltonianSum h, FermionRep rep);
    Snapshot at(double t) const override;
    std::string tag() const override { return "dense"; }
    const DensePropagator& propagator() const noexcept { return propagator_; }

private:
    StateVector initial_;
    HamiltonianSum h_;
    FermionRep rep_;
    DensePropagator propagator_;
};

// ToQuasi once, then per time: phase, FromQuasi onto the initial network.
// Leakage is the norm the return trip discards.
class QuasiEvolver final : public Evolver {
public:
    QuasiEvolver(StateVector initial, ModeTransform basis, TransformOptions opts = {});
    Snapshot at(double t) const override;
    std::string tag() const override { return "quasi"; }

    int quasi_cutoff() const noexcept { return quasi_cutoff_; }
    const StateVector& quasi_initial() const noexcept { return quasi_initial_; }

private:
    NetworkSpec original_;
    ModeTransform basis_;
    TransformOptions opts_;
    StateVector quasi_initial_;
    int quasi_cutoff_{0};
    double initial_leakage_{0.0};
};

struct CoherenceObservable {
    std::vector<std::size_t> keep;  // ascending subsystem sites
    CoherencePair pair;             // kets over the kept sites
};

struct PhaseObservable {
    std::vector<std::size_t> keep;
    CoherencePair pair;
};

using Observable = std::variant<OperatorSum, CoherenceObservable, PhaseObservable>;

double evaluate(const Observable& obs, const StateVector& state, FermionRep rep);

struct SeriesPoint {
    double time{0.0};
    double value{0.0};
    double leakage{0.0};
    std::string engine;
};

struct TimeSeries {
    std::vector<SeriesPoint> points;
    bool tainted{false};  // some point exceeded kLeakageTol
};

TimeSeries evolve_observable(const Evolver& engine, const TimeGrid& grid, const Observable& obs,
                             FermionRep rep = FermionRep::StringCorrected);

// --------------------------- phase-kick ensemble -----------------------------

enum class KickDistribution { Gaussian, Uniform };

// Each kick adds phi_j to the |0> component and -phi_j to |1>. Gaussian kicks
// have standard deviation `width`; uniform kicks are drawn from
// [-width/2, width/2]. Kick j lands at time j / kicks_per_unit_time.
struct PhaseKickModel {
    KickDistribution distribution{KickDistribution::Gaussian};
    double width{0.1};
    double kicks_per_unit_time{1.0};
    std::uint64_t seed{0};
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> coherence;       // |<rho_01>| normalized to its tau = 0 value
    std::vector<double> standard_error;  // of the normalized coherence
    std::vector<double> expected;        // closed-form ensemble limit
    std::size_t samples{0};
};

std::size_t kicks_by(const PhaseKickModel& model, double tau);
double expected_kick_coherence(const PhaseKickModel& model, double tau);

// Deterministic in (model.seed, samples) regardless of thread count: sample s
// draws from Rng(seed, s) and the mean is reduced in sample order.
EnsembleResult phase_kick_ensemble(Complex alpha, Complex beta, const PhaseKickModel& model, const TimeGrid& grid,
                                   std::size_t samples);

}  // namespace sdfs

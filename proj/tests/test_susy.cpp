#include "doctest.h"

#include "sdfs/rng.hpp"
#include "sdfs/susy.hpp"

#include <cmath>

using namespace sdfs;

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

const std::vector<Complex> kUnit{1.0};

CMatrix matched_coupling() {
    CMatrix w(2, 2);
    w << 0.8, Complex(0.35, -0.2), Complex(0.35, 0.2), -0.3;
    return w;
}

}  // namespace

TEST_CASE("supercharge swaps a boson and a fermion quantum") {
    const SusyNetworkSpec s{1, 2, 0};
    const NetworkSpec net = s.network();
    REQUIRE(net.size() == 2);
    CHECK(net.mode(0).is_boson());
    CHECK(net.mode(1).is_fermion());
    const OperatorSum q = build_supercharge(s, 0, kUnit);
    const OperatorSum h = susy_hamiltonian(q);
    for (FermionRep rep : {FermionRep::StringCorrected, FermionRep::SpinTensor}) {
        const StateVector b = StateVector::basis(net, {1, 0}), f = StateVector::basis(net, {0, 1});
        CHECK((apply(q, f, rep) - b).norm() < 1e-12);
        CHECK((apply(q, b, rep) - f).norm() < 1e-12);
        CHECK((apply(h, b, rep) - b).norm() < 1e-12);
        CHECK((apply(h, f, rep) - f).norm() < 1e-12);
        CHECK(apply(h, StateVector::vacuum(net), rep).norm() < 1e-12);
        CHECK(hermiticity_defect(operator_matrix(net, q, rep)) < 1e-14);
    }
}

TEST_CASE("Plus and Minus qubit states are supercharge eigenstates") {
    const SusyNetworkSpec s{1, 2, 0};
    const NetworkSpec net = s.network();
    const OperatorSum q = build_supercharge(s, 0, kUnit);
    const StateVector plus = build_dfs_state({QubitSign::Plus, 0, 1}, net);
    const StateVector minus = build_dfs_state({QubitSign::Minus, 0, 1}, net);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(plus.amplitude({1, 0}) - r) < 1e-15);
    CHECK(std::abs(plus.amplitude({0, 1}) - r) < 1e-15);
    CHECK(std::abs(minus.amplitude({1, 0}) + r) < 1e-15);
    CHECK((apply(q, plus, FermionRep::StringCorrected) - plus).norm() < 1e-12);
    CHECK((apply(q, minus, FermionRep::StringCorrected) + minus).norm() < 1e-12);
    CHECK(std::abs(plus.inner(minus)) < 1e-15);
}

TEST_CASE("supercharge commutes with its Hamiltonian") {
    Rng rng(3);
    const SusyNetworkSpec s{2, 3, 1};
    const NetworkSpec net = s.network();
    const std::vector<Complex> w{Complex{rng.normal(), rng.normal()}, Complex{rng.normal(), rng.normal()}};
    const OperatorSum q = build_supercharge(s, 1, w);
    const CMatrix qm = operator_matrix(net, q, FermionRep::StringCorrected);
    const CMatrix hm = operator_matrix(net, susy_hamiltonian(q), FermionRep::StringCorrected);
    const std::vector<std::size_t> keep = protected_subspace(net);
    CMatrix comm = qm * hm - hm * qm;
    double worst = 0.0;
    for (std::size_t r : keep)
        for (std::size_t c : keep) worst = std::max(worst, std::abs(comm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
    CHECK(worst < 1e-10);
    CHECK(max_abs(hm - hm.adjoint()) < 1e-12);
}

TEST_CASE("partner indices wrap around") {
    const SusyNetworkSpec s{3, 2, 0};
    CHECK(s.partner(0, 0) == 3);
    CHECK(s.partner(2, 1) == 3);
    CHECK(s.partner(1, 2) == 3);
    CHECK(s.partner(0, -1) == 5);
}

TEST_CASE("protected subspace keeps boson occupations below the cutoff") {
    const NetworkSpec net = SusyNetworkSpec{2, 2, 0}.network();
    const std::vector<std::size_t> keep = protected_subspace(net);
    CHECK(keep.size() == 16);
    for (std::size_t r : keep) {
        const Occupations occ = net.ket(r);
        CHECK(occ[0] <= 1);
        CHECK(occ[1] <= 1);
    }
}

TEST_CASE("Nicolai table") {
    const SusyNetworkSpec s{2, 2, 0};
    const std::vector<Complex> w{1.0, 1.0};
    const std::vector<int> offsets{0, 1};
    const std::vector<FermionRep> reps{FermionRep::StringCorrected, FermionRep::SpinTensor};
    const std::vector<NicolaiRow> rows = verify_susy_algebra(s, offsets, w, reps);
    REQUIRE(rows.size() == 4);
    for (const NicolaiRow& row : rows) {
        CHECK(row.protected_dim == 16);
        CHECK(std::isfinite(row.delta));
        if (row.offset == 0 && row.rep == FermionRep::StringCorrected) CHECK(row.delta < 1e-10);
    }
    ::setenv("SUSY_DFS_DENSE_GUARD", "8", 1);
    CHECK_THROWS_AS(verify_susy_algebra(s, offsets, w, reps), std::length_error);
    ::unsetenv("SUSY_DFS_DENSE_GUARD");
}

TEST_CASE("phase unwrapping") {
    const std::vector<double> wrapped{3.0, -3.0, -2.9, 3.1};
    const std::vector<double> out = unwrap_phases(wrapped);
    CHECK(out[0] == 3.0);
    CHECK(std::abs(out[1] - (2.0 * M_PI - 3.0)) < 1e-12);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(std::abs(out[i] - out[i - 1]) < M_PI);
    CHECK(unwrap_phases(std::vector<double>{}).empty());
}

TEST_CASE("qubit on uncoupled pairs: phase and coherence are stationary") {
    CMatrix w = CMatrix::Zero(2, 2);
    w.diagonal() << 0.9, 0.4;
    const TimeGrid grid = TimeGrid::linspace(0.0, 20.0, 20);
    for (QubitSign sign : {QubitSign::Plus, QubitSign::Minus}) {
        const auto samples = susy_qubit_evolution({sign, 0, 2}, CouplingMatrix(w), CouplingMatrix(w), grid);
        for (const QubitSample& q : samples) {
            CHECK(std::abs(q.coherence - 0.5) < 1e-12);
            CHECK(std::abs(q.relative_phase - samples.front().relative_phase) < 1e-12);
            CHECK(q.leakage < kLeakageTol);
        }
    }
}

TEST_CASE("matched spectra: constant relative phase, coherence follows the pair population") {
    const CouplingMatrix w(matched_coupling());
    const TimeGrid grid = TimeGrid::linspace(0.0, 20.0, 20);
    const auto samples = susy_qubit_evolution({QubitSign::Plus, 0, 2}, w, w, grid);
    double lowest = 1.0;
    for (const QubitSample& q : samples) {
        CHECK(std::abs(q.relative_phase - samples.front().relative_phase) < 1e-9);
        // equal boson and fermion magnitudes: |rho_ab| is half the pair population
        CHECK(std::abs(q.coherence - 0.5 * q.pair_population) < 1e-12);
        lowest = std::min(lowest, q.pair_population);
    }
    // population hops to the environment pair, so the raw coherence is not flat
    CHECK(lowest < 0.9);
}

TEST_CASE("quasi and dense qubit pipelines agree") {
    Rng rng(88);
    const TimeGrid grid = TimeGrid::linspace(0.0, 10.0, 10);
    for (int trial = 0; trial < 3; ++trial) {
        const CouplingMatrix wb(random_hermitian(2, rng)), wf(random_hermitian(2, rng));
        const auto a = susy_qubit_evolution({QubitSign::Minus, 1, 3}, wb, wf, grid);
        const auto b = susy_qubit_evolution_dense({QubitSign::Minus, 1, 3}, wb, wf, grid);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i].coherence - b[i].coherence) < 1e-10);
            CHECK(std::abs(wrap_phase(a[i].relative_phase - b[i].relative_phase)) < 1e-9);
            CHECK(std::abs(a[i].pair_population - b[i].pair_population) < 1e-10);
        }
    }
}

TEST_CASE("a uniform detuning makes the relative phase drift at half the detuning") {
    const double delta = 0.3;
    const CMatrix wb = matched_coupling();
    const CMatrix wf = wb + delta * CMatrix::Identity(2, 2);
    const TimeGrid grid = TimeGrid::linspace(0.0, 20.0, 20);
    const auto samples = susy_qubit_evolution({QubitSign::Plus, 0, 2}, CouplingMatrix(wb), CouplingMatrix(wf), grid);
    std::vector<double> wrapped;
    for (const QubitSample& q : samples) wrapped.push_back(q.relative_phase);
    const std::vector<double> phase = unwrap_phases(wrapped);
    for (std::size_t i = 0; i < phase.size(); ++i) {
        CHECK(std::abs(phase[i] - phase[0] + 0.5 * delta * grid.times[i]) < 1e-9);
        if (i > 0) CHECK(phase[i] < phase[i - 1]);
    }
}

TEST_CASE("qubit evolution argument checks") {
    const TimeGrid grid = TimeGrid::linspace(0.0, 1.0, 2);
    CHECK_THROWS_AS(susy_qubit_evolution({}, CouplingMatrix::zero(1), CouplingMatrix::zero(1), grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(susy_qubit_evolution({}, CouplingMatrix::zero(2), CouplingMatrix::zero(3), grid),
                    std::invalid_argument);
    CHECK(to_string(FermionRep::StringCorrected) == "string_corrected");
    CHECK(to_string(FermionRep::SpinTensor) == "spin_tensor");
}

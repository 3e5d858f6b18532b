#include "doctest.h"

#include "sdfs/hamiltonians.hpp"
#include "sdfs/quasiparticle.hpp"
#include "sdfs/rng.hpp"

#include <cmath>

using namespace sdfs;

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

StateVector random_state(const NetworkSpec& spec, Rng& rng, int max_excitations) {
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Occupations occ = spec.ket(r);
        int total = 0;
        for (int n : occ) total += n;
        if (total <= max_excitations) amps(static_cast<Eigen::Index>(r)) = Complex{rng.normal(), rng.normal()};
    }
    return StateVector(spec, amps).normalized();
}

}  // namespace

TEST_CASE("two-mode hop: quasi modes are the symmetric and antisymmetric combinations") {
    CMatrix w(2, 2);
    w << 0, 1, 1, 0;
    const QuasiBasis basis = diagonalize_coupling(CouplingMatrix(w));
    CHECK(std::abs(basis.omega(0) + 1.0) < 1e-14);
    CHECK(std::abs(basis.omega(1) - 1.0) < 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix expected(2, 2);
    expected << r, r, -r, r;
    CHECK(max_abs(basis.u - expected) < 1e-14);

    // b_0+ |vac> = (q_0+ + q_1+)/sqrt2 |vac>
    const NetworkSpec spec = NetworkSpec::bosons(2, 1);
    const TransformResult out = transform_state(StateVector::basis(spec, {1, 0}), basis, Direction::ToQuasi);
    const NetworkSpec& q = out.state.spec();
    CHECK(std::abs(out.state.amplitude({1, 0}) - r) < 1e-14);
    CHECK(std::abs(out.state.amplitude({0, 1}) - r) < 1e-14);
    CHECK(std::abs(out.state.norm() - 1.0) < 1e-14);
    CHECK(q.size() == 2);
}

TEST_CASE("diagonal couplings give the identity transform") {
    CMatrix w = CMatrix::Zero(3, 3);
    w.diagonal() << 0.3, 0.7, 1.1;
    const QuasiBasis basis = diagonalize_coupling(CouplingMatrix(w));
    CHECK(max_abs(basis.u - CMatrix::Identity(3, 3)) == 0.0);

    Rng rng(3);
    const NetworkSpec spec = NetworkSpec::fermions(3);
    const StateVector psi = random_state(spec, rng, 2);
    TransformOptions opts;
    opts.target = spec;
    const TransformResult out = transform_state(psi, basis, Direction::ToQuasi, opts);
    CHECK((out.state.amplitudes() - psi.amplitudes()).norm() < 1e-14);
}

TEST_CASE("the vacuum is the quasi vacuum") {
    Rng rng(11);
    const QuasiBasis basis = diagonalize_coupling(CouplingMatrix(random_hermitian(3, rng)));
    for (const NetworkSpec& spec : {NetworkSpec::bosons(3, 2), NetworkSpec::fermions(3)}) {
        const TransformResult out = transform_state(StateVector::vacuum(spec), basis, Direction::ToQuasi);
        CHECK(std::abs(std::abs(out.state.amplitude(out.state.spec().vacuum())) - 1.0) < 1e-14);
        CHECK(out.leakage == 0.0);
    }
}

TEST_CASE("random couplings: unitary U, diagonal U+ W U, ascending spectrum") {
    Rng rng(2024);
    for (std::size_t n = 1; n <= 6; ++n) {
        const CouplingMatrix w(random_hermitian(n, rng));
        const QuasiBasis basis = diagonalize_coupling(w);
        CHECK(unitarity_defect(basis) < 1e-12);
        CHECK(diagonalization_residual(basis, w) < 1e-12);
        for (Eigen::Index k = 1; k < basis.omega.size(); ++k) CHECK(basis.omega(k - 1) <= basis.omega(k));
        // trace is basis independent
        CHECK(std::abs(basis.omega.sum() - w.matrix().trace().real()) < 1e-12);
    }
}

TEST_CASE("diagonalization is deterministic and phase-fixed") {
    Rng rng(77);
    const CouplingMatrix w(random_hermitian(5, rng));
    const QuasiBasis a = diagonalize_coupling(w);
    const QuasiBasis b = diagonalize_coupling(w);
    CHECK(a.u == b.u);
    CHECK(a.omega == b.omega);
    for (Eigen::Index k = 0; k < a.u.cols(); ++k) {
        Eigen::Index imax = 0;
        a.u.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(std::abs(a.u(imax, k).imag()) < 1e-15);
        CHECK(a.u(imax, k).real() > 0.0);
    }
}

TEST_CASE("ToQuasi then FromQuasi is the identity") {
    Rng rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        const CouplingMatrix w(random_hermitian(3, rng));
        const QuasiBasis basis = diagonalize_coupling(w);
        for (const NetworkSpec& spec : {NetworkSpec::bosons(3, 2), NetworkSpec::fermions(3)}) {
            const StateVector psi = random_state(spec, rng, 2);
            const TransformResult there = transform_state(psi, basis, Direction::ToQuasi);
            CHECK(there.leakage < 1e-8);
            TransformOptions back;
            back.target = spec;
            const TransformResult home = transform_state(there.state, basis, Direction::FromQuasi, back);
            CHECK((home.state.amplitudes() - psi.amplitudes()).norm() < 1e-12);
        }
    }
}

TEST_CASE("energy is the same in both bases") {
    Rng rng(31);
    const CouplingMatrix w(random_hermitian(3, rng));
    const QuasiBasis basis = diagonalize_coupling(w);
    const ModeTransform transform(basis);
    for (const NetworkSpec& spec : {NetworkSpec::bosons(3, 2), NetworkSpec::fermions(3)}) {
        const HamiltonianSum h = spec.mode(0).is_boson() ? build_boson_network(spec, w)
                                                         : build_fermion_network_ladder(spec, w);
        const StateVector psi = random_state(spec, rng, 2);
        const double e_site = expectation(psi, h, FermionRep::StringCorrected).real();
        const StateVector q = transform_state(psi, basis, Direction::ToQuasi).state;
        double e_quasi = 0.0;
        for (std::size_t r = 0; r < q.dim(); ++r) {
            const Occupations occ = q.spec().ket(r);
            e_quasi += std::norm(q.amplitudes()(static_cast<Eigen::Index>(r))) * transform.quasi_energy(occ);
        }
        CHECK(std::abs(e_site - e_quasi) < 1e-11);
    }
}

TEST_CASE("boson excitations need a wider quasi cutoff only when they bunch") {
    CMatrix w(2, 2);
    w << 0, 1, 1, 0;
    const QuasiBasis basis = diagonalize_coupling(CouplingMatrix(w));
    // |1,1> -> (q0+^2 - q1+^2)/2 |vac>: needs occupation 2 in quasi modes
    const NetworkSpec spec = NetworkSpec::bosons(2, 1);
    const TransformResult out = transform_state(StateVector::basis(spec, {1, 1}), basis, Direction::ToQuasi);
    CHECK(out.boson_cutoff == 2);
    CHECK(out.leakage < 1e-8);
    CHECK(std::abs(std::abs(out.state.amplitude({2, 0})) - std::sqrt(0.5)) < 1e-14);
    CHECK(std::abs(out.state.amplitude({1, 1})) < 1e-14);

    TransformOptions tight;
    tight.target = spec;
    CHECK_THROWS_AS(transform_state(StateVector::basis(spec, {1, 1}), basis, Direction::ToQuasi, tight),
                    TransformError);
    tight.throw_on_leakage = false;
    CHECK(std::abs(transform_state(StateVector::basis(spec, {1, 1}), basis, Direction::ToQuasi, tight).leakage - 1.0) <
          1e-12);
}

TEST_CASE("multi-excitation kets require opting in") {
    const NetworkSpec spec = NetworkSpec::fermions(3);
    Rng rng(1);
    const QuasiBasis basis = diagonalize_coupling(CouplingMatrix(random_hermitian(3, rng)));
    CHECK_THROWS(transform_state(StateVector::basis(spec, {1, 1, 1}), basis, Direction::ToQuasi));
    TransformOptions opts;
    opts.allow_multi_excitation = true;
    // three fermions in three modes: the quasi state is the filled sea up to det U
    const TransformResult out = transform_state(StateVector::basis(spec, {1, 1, 1}), basis, Direction::ToQuasi, opts);
    CHECK(std::abs(std::abs(out.state.amplitude({1, 1, 1})) - 1.0) < 1e-12);
}

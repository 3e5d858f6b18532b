// bench_scaling: cost of the quasi engine vs the dense oracle as the network grows
//
// Single-excitation boson networks of N modes (cutoff 1, so the dense space is
// 2^N). Times are wall-clock per propagation to 10 grid points; the trend is
// reported, nothing is asserted.

#include "sdfs/evolution.hpp"
#include "sdfs/rng.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

namespace {

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t max_n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 11;
    const sdfs::TimeGrid grid = sdfs::TimeGrid::linspace(0.0, 10.0, 10);
    std::printf("%4s %8s %14s %14s %14s\n", "N", "dim", "single_exc_s", "quasi_s", "dense_s");
    for (std::size_t n = 2; n <= max_n; ++n) {
        sdfs::Rng rng(7, n);
        const sdfs::CouplingMatrix w(sdfs::random_hermitian(n, rng));
        const sdfs::NetworkSpec spec = sdfs::NetworkSpec::bosons(n, 1);
        sdfs::Occupations occ = spec.vacuum();
        occ[0] = 1;
        const sdfs::StateVector psi = sdfs::StateVector::basis(spec, occ);
        const sdfs::QuasiBasis basis = sdfs::diagonalize_coupling(w);

        sdfs::CVector c = sdfs::CVector::Zero(static_cast<Eigen::Index>(n));
        c(0) = 1.0;
        const double t_single = seconds([&] {
            for (double t : grid.times) (void)sdfs::propagate_single_excitation(basis, c, t);
        });
        const double t_quasi = seconds([&] {
            const sdfs::QuasiEvolver q(psi, basis);
            for (double t : grid.times) (void)q.at(t);
        });
        double t_dense = -1.0;
        if (spec.total_dim() <= sdfs::dense_guard()) {
            t_dense = seconds([&] {
                const sdfs::DenseEvolver d(psi, sdfs::build_boson_network(spec, w), sdfs::FermionRep::StringCorrected);
                for (double t : grid.times) (void)d.at(t);
            });
        }
        std::printf("%4zu %8zu %14.6f %14.6f %14.6f\n", n, spec.total_dim(), t_single, t_quasi, t_dense);
    }
}

// evolution.cpp

#include "sdfs/evolution.hpp"

#include "sdfs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace sdfs {

TimeGrid::TimeGrid(std::vector<double> t) : times(std::move(t)) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw std::invalid_argument("TimeGrid: times must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("TimeGrid: times must be strictly ascending");
    }
}

TimeGrid TimeGrid::linspace(double start, double stop, std::size_t count) {
    if (count == 0) throw std::invalid_argument("TimeGrid::linspace: count must be positive");
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return TimeGrid(std::move(t));
}

// --------------------------- quasi engine ------------------------------------

StateVector propagate_quasi(const StateVector& quasi_state, const ModeTransform& basis, double t) {
    const NetworkSpec& spec = quasi_state.spec();
    CVector out = quasi_state.amplitudes();
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        auto& a = out(static_cast<Eigen::Index>(r));
        if (a == Complex{0.0}) continue;
        a *= std::exp(-kI * (basis.quasi_energy(spec.ket(r)) * t / kHbar));
    }
    return StateVector(spec, std::move(out));
}

CVector propagate_single_excitation(const QuasiBasis& basis, const CVector& amplitudes, double t) {
    if (amplitudes.size() != basis.u.rows())
        throw std::invalid_argument("propagate_single_excitation: amplitude count does not match block size");
    CVector q = basis.u.adjoint() * amplitudes;
    for (Eigen::Index k = 0; k < q.size(); ++k) q(k) *= std::exp(-kI * (basis.omega(k) * t / kHbar));
    return basis.u * q;
}

// --------------------------- dense oracle ------------------------------------

std::size_t dense_guard() {
    if (const char* env = std::getenv("SUSY_DFS_DENSE_GUARD")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 4096;
}

DensePropagator::DensePropagator(const NetworkSpec& spec, const HamiltonianSum& h, FermionRep rep)
    : DensePropagator(spec, [&] {
          if (spec.total_dim() > dense_guard())
              throw std::length_error("dense engine: dimension " + std::to_string(spec.total_dim()) +
                                      " exceeds the guard " + std::to_string(dense_guard()));
          return operator_matrix(spec, h, rep);
      }()) {}

DensePropagator::DensePropagator(const NetworkSpec& spec, const CMatrix& h) : spec_(spec), h_(h) {
    if (spec.total_dim() > dense_guard())
        throw std::length_error("dense engine: dimension " + std::to_string(spec.total_dim()) + " exceeds the guard " +
                                std::to_string(dense_guard()));
    if (static_cast<std::size_t>(h_.rows()) != spec.total_dim() || h_.rows() != h_.cols())
        throw std::invalid_argument("DensePropagator: Hamiltonian shape mismatch");
    if (hermiticity_defect(h_) > 1e-10) throw std::invalid_argument("DensePropagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h_);
    if (solver.info() != Eigen::Success) throw std::runtime_error("DensePropagator: eigensolver failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

StateVector DensePropagator::apply(const StateVector& state, double t) const {
    if (!(state.spec() == spec_)) throw std::invalid_argument("DensePropagator: network mismatch");
    CVector c = vectors_.adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * (energies_(k) * t / kHbar));
    return StateVector(spec_, vectors_ * c);
}

CMatrix DensePropagator::unitary(double t) const {
    CVector phases(energies_.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * (energies_(k) * t / kHbar));
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

StateVector propagate_dense(const StateVector& state, const HamiltonianSum& h, double t, FermionRep rep) {
    return DensePropagator(state.spec(), h, rep).apply(state, t);
}

// --------------------------- engines over a grid -----------------------------

DenseEvolver::DenseEvolver(StateVector initial, HamiltonianSum h, FermionRep rep)
    : initial_(std::move(initial)), h_(std::move(h)), rep_(rep), propagator_(initial_.spec(), h_, rep) {}

Snapshot DenseEvolver::at(double t) const {
    StateVector s = propagator_.apply(initial_, t);
    const double leak = truncation_flux(s, h_, rep_);
    return Snapshot{t, std::move(s), leak};
}

QuasiEvolver::QuasiEvolver(StateVector initial, ModeTransform basis, TransformOptions opts)
    : original_(initial.spec()),
      basis_(std::move(basis)),
      opts_(std::move(opts)),
      quasi_initial_(StateVector::zero(original_)) {
    TransformOptions to = opts_;
    to.target.reset();
    auto res = transform_state(initial, basis_, Direction::ToQuasi, to);
    quasi_initial_ = std::move(res.state);
    quasi_cutoff_ = res.boson_cutoff;
    initial_leakage_ = res.leakage;
}

Snapshot QuasiEvolver::at(double t) const {
    TransformOptions back = opts_;
    back.target = original_;
    back.throw_on_leakage = false;
    auto res = transform_state(propagate_quasi(quasi_initial_, basis_, t), basis_, Direction::FromQuasi, back);
    return Snapshot{t, std::move(res.state), res.leakage + initial_leakage_};
}

namespace {

DensityMatrix reduced_density(const StateVector& state, const std::vector<std::size_t>& keep) {
    std::vector<std::size_t> dims;
    for (const auto& m : state.spec().modes()) dims.push_back(m.local_dim());
    const CVector& a = state.amplitudes();
    DensityMatrix full(std::move(dims), a * a.adjoint());
    if (keep.empty()) return full;
    return partial_trace(full, keep);
}

}  // namespace

double evaluate(const Observable& obs, const StateVector& state, FermionRep rep) {
    if (const auto* op = std::get_if<OperatorSum>(&obs)) return expectation(state, *op, rep).real();
    if (const auto* c = std::get_if<CoherenceObservable>(&obs)) return coherence(reduced_density(state, c->keep), c->pair);
    const auto& p = std::get<PhaseObservable>(obs);
    return relative_phase(reduced_density(state, p.keep), p.pair);
}

TimeSeries evolve_observable(const Evolver& engine, const TimeGrid& grid, const Observable& obs, FermionRep rep) {
    TimeSeries out;
    for (double t : grid.times) {
        Snapshot snap = engine.at(t);
        out.points.push_back({t, evaluate(obs, snap.state, rep), snap.leakage, engine.tag()});
        out.tainted = out.tainted || snap.leakage > kLeakageTol;
    }
    return out;
}

// --------------------------- phase-kick ensemble -----------------------------

std::size_t kicks_by(const PhaseKickModel& model, double tau) {
    return static_cast<std::size_t>(std::floor(model.kicks_per_unit_time * tau + 1e-9));
}

double expected_kick_coherence(const PhaseKickModel& model, double tau) {
    const double k = static_cast<double>(kicks_by(model, tau));
    if (model.distribution == KickDistribution::Gaussian) return std::exp(-2.0 * k * model.width * model.width);
    const double per_kick = std::sin(model.width) / model.width;
    return std::pow(std::abs(per_kick), k);
}

EnsembleResult phase_kick_ensemble(Complex alpha, Complex beta, const PhaseKickModel& model, const TimeGrid& grid,
                                   std::size_t samples) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw std::invalid_argument("phase_kick_ensemble: |alpha|^2 + |beta|^2 must be 1");
    if (samples == 0) throw std::invalid_argument("phase_kick_ensemble: samples must be >= 1");
    if (!(model.width > 0.0) || !(model.kicks_per_unit_time > 0.0))
        throw std::invalid_argument("phase_kick_ensemble: width and kick rate must be positive");

    const std::size_t nt = grid.size();
    std::vector<double> phases(samples * nt);
    auto run_samples = [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            Rng rng(model.seed, s);
            double phi = 0.0;
            std::size_t drawn = 0;
            for (std::size_t i = 0; i < nt; ++i) {
                const std::size_t target = kicks_by(model, grid.times[i]);
                for (; drawn < target; ++drawn) {
                    phi += model.distribution == KickDistribution::Gaussian
                               ? model.width * rng.normal()
                               : rng.uniform(-0.5 * model.width, 0.5 * model.width);
                }
                phases[s * nt + i] = phi;
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || samples < 256) {
        run_samples(0, samples);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (samples + workers - 1) / workers;
        for (std::size_t b = 0; b < samples; b += chunk) pool.emplace_back(run_samples, b, std::min(samples, b + chunk));
    }

    EnsembleResult res;
    res.times = grid.times;
    res.samples = samples;
    const double scale = std::abs(alpha * std::conj(beta));
    for (std::size_t i = 0; i < nt; ++i) {
        res.expected.push_back(expected_kick_coherence(model, grid.times[i]));
        if (scale == 0.0) {
            // eigenstate input: the kick factors are a global phase
            res.coherence.push_back(1.0);
            res.standard_error.push_back(0.0);
            continue;
        }
        // ensemble density matrix, reduced in sample order
        Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
        double sum_c = 0.0, sum_s = 0.0, sum_cc = 0.0, sum_ss = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            const double phi = phases[s * nt + i];
            Eigen::Vector2cd psi(alpha * std::exp(kI * phi), beta * std::exp(-kI * phi));
            rho += psi * psi.adjoint();
            const double c = std::cos(2.0 * phi), sn = std::sin(2.0 * phi);
            sum_c += c;
            sum_s += sn;
            sum_cc += c * c;
            sum_ss += sn * sn;
        }
        rho /= static_cast<double>(samples);
        const DensityMatrix ensemble({2}, CMatrix(rho));
        res.coherence.push_back(coherence(ensemble, {{0}, {1}}) / scale);

        const double n = static_cast<double>(samples);
        double se = 0.0;
        if (samples > 1) {
            const double var_c = (sum_cc - sum_c * sum_c / n) / (n - 1.0);
            const double var_s = (sum_ss - sum_s * sum_s / n) / (n - 1.0);
            se = std::sqrt(std::max(0.0, var_c + var_s) / n);
        }
        res.standard_error.push_back(se);
    }
    return res;
}

}  // namespace sdfs

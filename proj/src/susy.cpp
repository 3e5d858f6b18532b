// susy.cpp

#include "sdfs/susy.hpp"

#include <numbers>
#include <stdexcept>

namespace sdfs {

NetworkSpec SusyNetworkSpec::network() const {
    if (n_pairs == 0) throw std::invalid_argument("SusyNetworkSpec: at least one pair required");
    std::vector<ModeSpec> modes(n_pairs, ModeSpec::boson(boson_cutoff));
    modes.insert(modes.end(), n_pairs, ModeSpec::fermion());
    return NetworkSpec(std::move(modes));
}

std::size_t SusyNetworkSpec::partner(std::size_t i, int offset) const {
    const auto n = static_cast<long long>(n_pairs);
    const long long j = ((static_cast<long long>(i) + offset) % n + n) % n;
    return fermion_site(static_cast<std::size_t>(j));
}

OperatorSum build_supercharge(const SusyNetworkSpec& spec, int offset, std::span<const Complex> weights) {
    if (weights.size() != spec.n_pairs) throw std::invalid_argument("build_supercharge: one weight per pair");
    OperatorSum q;
    for (std::size_t i = 0; i < spec.n_pairs; ++i) {
        const std::size_t b = spec.boson_site(i), f = spec.partner(i, offset);
        q.add(weights[i], {create(b), annihilate(f)});
        q.add(std::conj(weights[i]), {annihilate(b), create(f)});
    }
    return q;
}

OperatorSum susy_hamiltonian(const OperatorSum& q) { return (q * q) * Complex{kHbar / 2.0}; }

OperatorSum nicolai_reference(const SusyNetworkSpec& spec, std::span<const Complex> weights) {
    if (weights.size() != spec.n_pairs) throw std::invalid_argument("nicolai_reference: one weight per pair");
    OperatorSum h;
    for (std::size_t i = 0; i < spec.n_pairs; ++i) {
        const double w2 = std::norm(weights[i]);
        h.add(w2, {create(spec.boson_site(i)), annihilate(spec.boson_site(i))});
        h.add(w2, {create(spec.fermion_site(i)), annihilate(spec.fermion_site(i))});
    }
    return h;
}

StateVector build_dfs_state(const SusyQubit& qubit, const NetworkSpec& spec, FermionRep rep) {
    if (qubit.boson_site >= spec.size() || !spec.mode(qubit.boson_site).is_boson())
        throw std::invalid_argument("build_dfs_state: boson_site is not a bosonic mode");
    if (qubit.fermion_site >= spec.size() || !spec.mode(qubit.fermion_site).is_fermion())
        throw std::invalid_argument("build_dfs_state: fermion_site is not a fermionic mode");
    const StateVector vac = StateVector::vacuum(spec);
    const StateVector fermion_part = apply_ladder(vac, qubit.fermion_site, Ladder::Create, rep);
    const StateVector boson_part = apply_ladder(vac, qubit.boson_site, Ladder::Create, rep);
    const double s = qubit.sign == QubitSign::Plus ? 1.0 : -1.0;
    return (fermion_part + boson_part * Complex{s}) * Complex{1.0 / std::numbers::sqrt2};
}

CoherencePair qubit_pair(const SusyQubit& qubit) {
    if (qubit.boson_site < qubit.fermion_site) return {{1, 0}, {0, 1}};
    return {{0, 1}, {1, 0}};
}

namespace {

std::vector<QubitSample> sample_qubit(const SusyQubit& qubit, const Evolver& engine, const TimeGrid& grid) {
    const std::vector<std::size_t> keep = qubit.boson_site < qubit.fermion_site
                                              ? std::vector<std::size_t>{qubit.boson_site, qubit.fermion_site}
                                              : std::vector<std::size_t>{qubit.fermion_site, qubit.boson_site};
    const CoherencePair pair = qubit_pair(qubit);
    std::vector<QubitSample> out;
    for (double t : grid.times) {
        const Snapshot snap = engine.at(t);
        const auto& spec = snap.state.spec();
        Occupations boson_ket = spec.vacuum(), fermion_ket = spec.vacuum();
        boson_ket[qubit.boson_site] = 1;
        fermion_ket[qubit.fermion_site] = 1;

        std::vector<std::size_t> dims;
        for (const auto& m : spec.modes()) dims.push_back(m.local_dim());
        const CVector& a = snap.state.amplitudes();
        const DensityMatrix reduced = partial_trace(DensityMatrix(dims, a * a.adjoint()), keep);

        QubitSample s;
        s.time = t;
        s.phase_boson = std::arg(snap.state.amplitude(boson_ket));
        s.phase_fermion = std::arg(snap.state.amplitude(fermion_ket));
        s.relative_phase = relative_phase(reduced, pair);
        s.coherence = coherence(reduced, pair);
        s.pair_population = (reduced.element(pair.ket_a, pair.ket_a) + reduced.element(pair.ket_b, pair.ket_b)).real();
        s.leakage = snap.leakage;
        out.push_back(s);
    }
    return out;
}

SusyNetworkSpec qubit_network(const CouplingMatrix& boson, const CouplingMatrix& fermion, int cutoff) {
    if (boson.size() != fermion.size()) throw std::invalid_argument("susy_qubit_evolution: couplings differ in size");
    if (boson.size() < 2)
        throw std::invalid_argument("susy_qubit_evolution: needs a system pair and at least one environment pair");
    return SusyNetworkSpec{boson.size(), cutoff, 0};
}

}  // namespace

std::vector<QubitSample> susy_qubit_evolution(const SusyQubit& qubit, const CouplingMatrix& boson_coupling,
                                              const CouplingMatrix& fermion_coupling, const TimeGrid& grid,
                                              int boson_cutoff) {
    const SusyNetworkSpec spec = qubit_network(boson_coupling, fermion_coupling, boson_cutoff);
    const NetworkSpec net = spec.network();
    const BlockQuasiBasis basis = block_diagonalize(boson_coupling, fermion_coupling);
    const QuasiEvolver engine(build_dfs_state(qubit, net), basis);
    return sample_qubit(qubit, engine, grid);
}

std::vector<QubitSample> susy_qubit_evolution_dense(const SusyQubit& qubit, const CouplingMatrix& boson_coupling,
                                                    const CouplingMatrix& fermion_coupling, const TimeGrid& grid,
                                                    int boson_cutoff) {
    const SusyNetworkSpec spec = qubit_network(boson_coupling, fermion_coupling, boson_cutoff);
    const NetworkSpec net = spec.network();
    SiteMap fermion_sites;
    for (std::size_t i = 0; i < spec.n_pairs; ++i) fermion_sites.push_back(spec.fermion_site(i));
    const HamiltonianSum h = build_boson_network(net, boson_coupling) +
                             build_fermion_network_ladder(net, fermion_coupling, fermion_sites);
    const DenseEvolver engine(build_dfs_state(qubit, net), h, FermionRep::StringCorrected);
    return sample_qubit(qubit, engine, grid);
}

std::vector<double> unwrap_phases(std::span<const double> wrapped) {
    std::vector<double> out(wrapped.begin(), wrapped.end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double step = wrap_phase(wrapped[i] - wrapped[i - 1]);
        out[i] = out[i - 1] + step;
    }
    return out;
}

std::vector<std::size_t> protected_subspace(const NetworkSpec& spec) {
    std::vector<std::size_t> ranks;
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Occupations occ = spec.ket(r);
        bool ok = true;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (spec.mode(i).is_boson() && occ[i] >= spec.mode(i).cutoff) ok = false;
        if (ok) ranks.push_back(r);
    }
    return ranks;
}

std::vector<NicolaiRow> verify_susy_algebra(const SusyNetworkSpec& spec, std::span<const int> offsets,
                                            std::span<const Complex> weights, std::span<const FermionRep> reps) {
    const NetworkSpec net = spec.network();
    if (net.total_dim() > dense_guard()) throw std::length_error("verify_susy_algebra: network exceeds the dense guard");
    const auto keep = protected_subspace(net);
    std::vector<NicolaiRow> rows;
    for (int n : offsets) {
        const OperatorSum h = susy_hamiltonian(build_supercharge(spec, n, weights));
        const OperatorSum ref = nicolai_reference(spec, weights);
        for (FermionRep rep : reps) {
            const CMatrix diff = operator_matrix(net, h, rep) - operator_matrix(net, ref, rep);
            double delta = 0.0;
            for (std::size_t r : keep)
                for (std::size_t c : keep)
                    delta = std::max(delta, std::abs(diff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
            rows.push_back({n, rep, delta, keep.size()});
        }
    }
    return rows;
}

std::string to_string(FermionRep rep) {
    return rep == FermionRep::StringCorrected ? "string_corrected" : "spin_tensor";
}

}  // namespace sdfs

// verify.cpp

#include "sdfs/verify.hpp"

#include "sdfs/evolution.hpp"
#include "sdfs/hamiltonians.hpp"
#include "sdfs/metrics.hpp"
#include "sdfs/rng.hpp"
#include "sdfs/susy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sdfs {

std::optional<Suite> parse_suite(std::string_view name) {
    if (name == "algebra") return Suite::Algebra;
    if (name == "oracle") return Suite::Oracle;
    if (name == "dfs") return Suite::Dfs;
    if (name == "susy") return Suite::Susy;
    if (name == "all") return Suite::All;
    return std::nullopt;
}

bool VerifyReport::ok() const {
    return std::ranges::all_of(checks, [](const Check& c) { return !c.asserted || c.passed; });
}

namespace {

class Recorder {
public:
    Recorder(VerifyReport& r, std::string suite) : report_(r), suite_(std::move(suite)) {}

    void below(std::string name, double residual, double tol, std::string detail = {}, bool asserted = true) {
        push(std::move(name), residual, tol, false, asserted, std::move(detail));
    }
    void above(std::string name, double residual, double tol, std::string detail = {}, bool asserted = true) {
        push(std::move(name), residual, tol, true, asserted, std::move(detail));
    }
    void explore(std::string name, double value, std::string detail = {}) {
        push(std::move(name), value, 0.0, false, false, std::move(detail));
    }
    void table(std::string text) { report_.tables.push_back(std::move(text)); }

private:
    void push(std::string name, double residual, double tol, bool above, bool asserted, std::string detail) {
        Check c{suite_, std::move(name), residual, tol, above, asserted, false, std::move(detail)};
        c.passed = std::isfinite(residual) && (above ? residual > tol : residual < tol);
        report_.checks.push_back(std::move(c));
    }

    VerifyReport& report_;
    std::string suite_;
};

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CMatrix identity(const NetworkSpec& spec) {
    return CMatrix::Identity(static_cast<Eigen::Index>(spec.total_dim()), static_cast<Eigen::Index>(spec.total_dim()));
}

OperatorSum anticommutator(Factor a, Factor b) {
    OperatorSum op;
    op.add(1.0, {a, b});
    op.add(1.0, {b, a});
    return op;
}

OperatorSum commutator(Factor a, Factor b) {
    OperatorSum op;
    op.add(1.0, {a, b});
    op.add(-1.0, {b, a});
    return op;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// --------------------------- algebra -----------------------------------------

void algebra_suite(VerifyReport& report) {
    Recorder rec(report, "algebra");

    const NetworkSpec bosons = NetworkSpec::bosons(2, 3);
    double below_cut = 0.0, at_cut = 0.0;
    for (std::size_t s = 0; s < bosons.size(); ++s) {
        const CMatrix c = operator_matrix(bosons, commutator(annihilate(s), create(s)), FermionRep::StringCorrected) -
                          identity(bosons);
        for (std::size_t r = 0; r < bosons.total_dim(); ++r) {
            double& slot = bosons.ket(r)[s] < bosons.mode(s).cutoff ? below_cut : at_cut;
            slot = std::max(slot, c.col(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff());
        }
    }
    rec.below("boson [b, b+] = 1 below the cutoff", below_cut, 1e-12);
    rec.explore("boson [b, b+] at the cutoff (truncation boundary)", at_cut,
                "hard truncation: b+ at the cutoff gives zero, so [b, b+] - 1 = -(cutoff + 1) there");

    // fermions interleaved with a boson: the parity string must skip it
    const NetworkSpec mixed({ModeSpec::fermion(), ModeSpec::boson(2), ModeSpec::fermion(), ModeSpec::fermion()});
    const std::vector<std::size_t> fs = mixed.sites_of(ModeKind::Fermion);
    for (FermionRep rep : {FermionRep::StringCorrected, FermionRep::SpinTensor}) {
        double same = 0.0, eq10 = 0.0;
        for (std::size_t s : fs) {
            same = std::max(same, max_abs(operator_matrix(mixed, anticommutator(annihilate(s), create(s)), rep) -
                                          identity(mixed)));
            OperatorSum lhs;
            lhs.add(1.0, {create(s), annihilate(s)});
            lhs.add(-0.5, {});
            lhs.add(-0.5, {pauli(s, PauliAxis::Z)});
            eq10 = std::max(eq10, max_abs(operator_matrix(mixed, lhs, rep)));
        }
        rec.below("{f, f+} = 1 on every fermion (" + to_string(rep) + ")", same, 1e-12);
        rec.below("f+f - 1/2 = sigma_z/2 (" + to_string(rep) + ")", eq10, 1e-12);
    }
    double anti = 0.0, comm = 0.0;
    for (std::size_t i : fs) {
        for (std::size_t j : fs) {
            if (i == j) continue;
            anti = std::max(anti, max_abs(operator_matrix(mixed, anticommutator(annihilate(i), create(j)),
                                                          FermionRep::StringCorrected)));
            anti = std::max(anti, max_abs(operator_matrix(mixed, anticommutator(annihilate(i), annihilate(j)),
                                                          FermionRep::StringCorrected)));
            comm = std::max(comm, max_abs(operator_matrix(mixed, commutator(annihilate(i), create(j)),
                                                          FermionRep::SpinTensor)));
        }
    }
    rec.below("cross-site {f_i, f_j+} = {f_i, f_j} = 0 (string_corrected)", anti, 1e-12);
    rec.below("cross-site [f_i, f_j+] = 0 (spin_tensor)", comm, 1e-12);

    const NetworkSpec spins = NetworkSpec::fermions(3);
    double eq12 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const OperatorSum product = OperatorSum::single(0.25, {pauli(i, PauliAxis::Z), pauli(j, PauliAxis::Z)});
            for (FermionRep rep : {FermionRep::StringCorrected, FermionRep::SpinTensor})
                eq12 = std::max(eq12, max_abs(operator_matrix(spins, product, rep) -
                                              operator_matrix(spins, sigma_product_ladder_expansion(i, j), rep)));
        }
    }
    rec.below("(sigma_z/2)(sigma_z/2) = n n - (n + n)/2 + 1/4 for every pair", eq12, 1e-12);

    Rng rng(13, 0);
    const CouplingMatrix generic(CMatrix(random_hermitian(3, rng).real().cast<Complex>()));
    const double gap =
        max_abs(operator_matrix(spins, build_fermion_network_spin(spins, generic), FermionRep::StringCorrected) -
                operator_matrix(spins, build_fermion_network_ladder(spins, generic), FermionRep::StringCorrected));
    rec.above("spin-form and ladder-form fermion networks differ", gap, 0.1, "seeded generic real coupling");

    double herm = 0.0;
    const NetworkSpec bn = NetworkSpec::bosons(3, 2);
    herm = std::max(herm, hermiticity_defect(operator_matrix(
                              bn, build_boson_network(bn, CouplingMatrix(random_hermitian(3, rng))), FermionRep::StringCorrected)));
    herm = std::max(herm, hermiticity_defect(operator_matrix(
                              spins, build_fermion_network_spin(spins, generic), FermionRep::SpinTensor)));
    const NetworkSpec bf({ModeSpec::boson(2), ModeSpec::fermion(), ModeSpec::boson(2), ModeSpec::fermion()});
    const std::vector<MixedPair> pairs{{0, 1, Complex{0.3, 0.7}}, {2, 3, Complex{-1.1, 0.2}}, {0, 3, 0.5}};
    herm = std::max(herm, hermiticity_defect(operator_matrix(bf, build_mixed_interaction(bf, pairs),
                                                             FermionRep::StringCorrected)));
    rec.below("built Hamiltonians are Hermitian", herm, 1e-12);
}

// --------------------------- oracle ------------------------------------------

// Normalized random state on the kets with total occupation <= limit.
StateVector random_sector_state(const NetworkSpec& spec, int limit, Rng& rng) {
    CVector a = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Occupations occ = spec.ket(r);
        int total = 0;
        for (int n : occ) total += n;
        if (total <= limit) a(static_cast<Eigen::Index>(r)) = Complex{rng.normal(), rng.normal()};
    }
    return StateVector(spec, a / a.norm());
}

double engine_gap(const Evolver& a, const Evolver& b, const TimeGrid& grid, double* leak = nullptr) {
    double dev = 0.0;
    for (double t : grid.times) {
        const Snapshot sa = a.at(t), sb = b.at(t);
        dev = std::max(dev, (sa.state.amplitudes() - sb.state.amplitudes()).cwiseAbs().maxCoeff());
        if (leak) *leak = std::max(*leak, std::max(sa.leakage, sb.leakage));
    }
    return dev;
}

void oracle_suite(VerifyReport& report) {
    Recorder rec(report, "oracle");
    const TimeGrid grid = TimeGrid::linspace(0.0, 10.0, 10);
    TransformOptions opts;
    opts.allow_multi_excitation = true;

    double boson_dev = 0.0, boson_leak = 0.0;
    for (std::uint64_t c = 0; c < 20; ++c) {
        Rng rng(2024, c);
        const std::size_t n = 1 + c % 3;
        const int cutoff = 1 + static_cast<int>((c / 3) % 3);
        const NetworkSpec spec = NetworkSpec::bosons(n, cutoff);
        const CouplingMatrix w(random_hermitian(n, rng));
        const StateVector psi = random_sector_state(spec, cutoff, rng);
        const DenseEvolver dense(psi, build_boson_network(spec, w), FermionRep::StringCorrected);
        const QuasiEvolver quasi(psi, diagonalize_coupling(w), opts);
        boson_dev = std::max(boson_dev, engine_gap(quasi, dense, grid, &boson_leak));
    }
    rec.below("quasi vs dense, 20 seeded boson networks", boson_dev, 1e-9,
              "N <= 3, cutoff <= 3, states with total occupation <= cutoff; max leakage " + fmt("%.2e", boson_leak));

    double fermion_dev = 0.0;
    for (std::uint64_t c = 0; c < 10; ++c) {
        Rng rng(2025, c);
        const std::size_t n = 1 + c % 3;
        const NetworkSpec spec = NetworkSpec::fermions(n);
        const CouplingMatrix w(random_hermitian(n, rng));
        const StateVector psi(spec, random_amplitudes(spec.total_dim(), rng));
        const DenseEvolver dense(psi, build_fermion_network_ladder(spec, w), FermionRep::StringCorrected);
        const QuasiEvolver quasi(psi, diagonalize_coupling(w), opts);
        fermion_dev = std::max(fermion_dev, engine_gap(quasi, dense, grid));
    }
    rec.below("quasi vs dense, 10 seeded ladder-form fermion networks", fermion_dev, 1e-9);

    Rng rng(2026, 0);
    const CouplingMatrix wb(random_hermitian(2, rng)), wf(random_hermitian(2, rng));
    const auto q = susy_qubit_evolution({QubitSign::Plus, 0, 2}, wb, wf, grid);
    const auto d = susy_qubit_evolution_dense({QubitSign::Plus, 0, 2}, wb, wf, grid);
    double susy_dev = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        susy_dev = std::max(susy_dev, std::abs(q[i].coherence - d[i].coherence));
        susy_dev = std::max(susy_dev, std::abs(wrap_phase(q[i].relative_phase - d[i].relative_phase)));
    }
    rec.below("SUSY qubit: block quasi pipeline vs dense", susy_dev, 1e-9, "coherence and relative phase");
}

// --------------------------- dfs ---------------------------------------------

struct DfsSetup {
    bool singlet{true};
    std::vector<double> w0, w1;  // weights from each env spin to system spins 0 and 1
    std::vector<PauliAxis> axes;
    std::vector<std::pair<Complex, Complex>> env;  // product state of the environment
};

std::vector<double> dfs_coherence(const DfsSetup& d, const TimeGrid& grid) {
    const std::size_t ne = d.axes.size();
    const NetworkSpec spec = NetworkSpec::fermions(2 + ne);
    std::vector<DephasingLink> links;
    for (std::size_t e = 0; e < ne; ++e) {
        links.push_back({0, 2 + e, d.w0[e], d.axes[e]});
        links.push_back({1, 2 + e, d.w1[e], d.axes[e]});
    }
    CVector a = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Occupations occ = spec.ket(r);
        Complex sys = 0.0;
        if (occ[0] == 0 && occ[1] == 1) sys = 1.0 / std::numbers::sqrt2;
        if (occ[0] == 1 && occ[1] == 0) sys = (d.singlet ? -1.0 : 1.0) / std::numbers::sqrt2;
        for (std::size_t e = 0; e < ne; ++e) sys *= occ[2 + e] ? d.env[e].second : d.env[e].first;
        a(static_cast<Eigen::Index>(r)) = sys;
    }
    const DenseEvolver engine(StateVector(spec, a), build_dephasing_interaction(spec, links), FermionRep::SpinTensor);
    std::vector<double> out;
    for (double t : grid.times) {
        const DensityMatrix rho = partial_trace(density_from_state(engine.at(t).state), {0, 1});
        out.push_back(coherence(rho, {{0, 1}, {1, 0}}));
    }
    return out;
}

std::pair<Complex, Complex> random_qubit(Rng& rng) {
    const CVector v = random_amplitudes(2, rng);
    return {v(0), v(1)};
}

DfsSetup random_collective(Rng& rng, bool singlet, std::optional<PauliAxis> fixed_axis) {
    DfsSetup d;
    d.singlet = singlet;
    for (int e = 0; e < 3; ++e) {
        const double w = rng.uniform(0.2, 1.5);
        d.w0.push_back(w);
        d.w1.push_back(w);
        d.axes.push_back(fixed_axis ? *fixed_axis : static_cast<PauliAxis>(rng.next() % 3));
        d.env.push_back(random_qubit(rng));
    }
    return d;
}

double max_dev(const std::vector<double>& v, double ref) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x - ref));
    return m;
}

void dfs_suite(VerifyReport& report) {
    Recorder rec(report, "dfs");
    const TimeGrid grid = TimeGrid::linspace(0.0, 10.0, 21);

    double singlet = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed, 1);
        singlet = std::max(singlet, max_dev(dfs_coherence(random_collective(rng, true, std::nullopt), grid), 0.5));
    }
    rec.below("singlet coherence = 0.5 under collective dephasing", singlet, 1e-9,
              "2 system + 3 environment spins, 5 seeds, mixed X/Y/Z axes");

    Rng rz(100, 1);
    const auto tz = dfs_coherence(random_collective(rz, false, PauliAxis::Z), grid);
    rec.below("triplet coherence constant under Z-axis dephasing", max_dev(tz, tz.front()), 1e-9);
    Rng rx(100, 1);
    const auto tx = dfs_coherence(random_collective(rx, false, PauliAxis::X), grid);
    rec.above("triplet coherence leaves 0.5 under X-axis dephasing", max_dev(tx, 0.5), 0.05);

    Rng rg(200, 1);
    DfsSetup general = random_collective(rg, true, PauliAxis::Z);
    for (auto& w : general.w1) w += rg.uniform(0.2, 0.8);
    rec.explore("singlet under unequal per-spin couplings: max |coherence - 0.5|",
                max_dev(dfs_coherence(general, grid), 0.5),
                "collective coupling is what protects the singlet; unequal weights are reported, not asserted");
}

// --------------------------- susy --------------------------------------------

void susy_suite(VerifyReport& report) {
    Recorder rec(report, "susy");
    const SusyNetworkSpec one{1, 2, 0};
    const NetworkSpec net = one.network();
    const std::vector<Complex> unit{1.0};
    const OperatorSum q = build_supercharge(one, 0, unit);
    const OperatorSum h = susy_hamiltonian(q);
    const FermionRep rep = FermionRep::StringCorrected;
    const StateVector k01 = StateVector::basis(net, {0, 1}), k10 = StateVector::basis(net, {1, 0});
    const StateVector vac = StateVector::vacuum(net);

    rec.below("Q|0_B 1_F> = |1_B 0_F>", (apply(q, k01, rep) - k10).norm(), 1e-12);
    rec.below("Q|1_B 0_F> = |0_B 1_F>", (apply(q, k10, rep) - k01).norm(), 1e-12);
    rec.below("Q|0_B 0_F> = 0", apply(q, vac, rep).norm(), 1e-12);
    rec.below("H_SUSY|0_B 1_F> = |0_B 1_F>", (apply(h, k01, rep) - k01).norm(), 1e-12);
    rec.below("H_SUSY|1_B 0_F> = |1_B 0_F>", (apply(h, k10, rep) - k10).norm(), 1e-12);
    rec.below("H_SUSY vacuum energy = 0", apply(h, vac, rep).norm(), 1e-12);
    rec.below("degenerate pair: <01|H|01> = <10|H|10>",
              std::abs(expectation(k01, h, rep) - expectation(k10, h, rep)), 1e-12);
    const StateVector plus = build_dfs_state({QubitSign::Plus, 0, 1}, net);
    const StateVector minus = build_dfs_state({QubitSign::Minus, 0, 1}, net);
    rec.below("Q (plus) = +1 (plus)", (apply(q, plus, rep) - plus).norm(), 1e-12);
    rec.below("Q (minus) = -1 (minus)", (apply(q, minus, rep) + minus).norm(), 1e-12);
    const CMatrix qm = operator_matrix(net, q, rep), hm = operator_matrix(net, h, rep);
    rec.below("[Q, H_SUSY] = 0", max_abs(qm * hm - hm * qm), 1e-12);

    const std::vector<std::size_t> pair_sites{0, 1};
    const std::vector<double> omegas{1.7, 1.7};
    NetworkOptions offset;
    offset.include_ground_offset = true;
    const OperatorSum free = build_free_oscillators(net, pair_sites, omegas, offset);
    rec.below("ground offsets cancel: (H_B + H_F)|vac> = 0", apply(free, vac, rep).norm(), 1e-12);

    const std::vector<FermionRep> reps{FermionRep::StringCorrected, FermionRep::SpinTensor};
    const std::vector<int> n0{0};
    for (const auto& row : verify_susy_algebra(one, n0, unit, reps))
        rec.below("N=1 n=0 Q^2 matches free oscillators (" + to_string(row.rep) + ")", row.delta, 1e-12);

    const SusyNetworkSpec two{2, 2, 0};
    const std::vector<Complex> unit2{1.0, 1.0};
    const std::vector<int> offsets{0, 1};
    std::ostringstream table;
    table << "Nicolai check, N = 2, unit weights, boson occupations <= 1\n";
    table << "  n  representation     protected_dim  delta\n";
    for (const auto& row : verify_susy_algebra(two, offsets, unit2, reps)) {
        char line[128];
        std::snprintf(line, sizeof line, "  %d  %-17s  %13zu  %.3e\n", row.offset, to_string(row.rep).c_str(),
                      row.protected_dim, row.delta);
        table << line;
        const std::string name = "N=2 n=" + std::to_string(row.offset) + " delta (" + to_string(row.rep) + ")";
        if (row.offset == 0 && row.rep == FermionRep::StringCorrected)
            rec.below(name, row.delta, 1e-10);
        else
            rec.explore(name, row.delta);
    }
    rec.table(table.str());

    // Matched spectra: one coupling for both species.
    const TimeGrid grid = TimeGrid::linspace(0.0, 10.0, 20);
    Rng rng(31, 0);
    const CouplingMatrix w(random_hermitian(2, rng));
    for (QubitSign sign : {QubitSign::Plus, QubitSign::Minus}) {
        const auto samples = susy_qubit_evolution({sign, 0, 2}, w, w, grid);
        double phase = 0.0, coh = 0.0, pop = 1.0;
        for (const auto& s : samples) {
            phase = std::max(phase, std::abs(wrap_phase(s.relative_phase - samples.front().relative_phase)));
            coh = std::max(coh, std::abs(s.coherence - samples.front().coherence));
            pop = std::min(pop, s.pair_population);
        }
        const std::string tag = sign == QubitSign::Plus ? "plus" : "minus";
        rec.below("matched spectra: relative phase constant (" + tag + ")", phase, 1e-9);
        rec.below("matched spectra: coherence constant (" + tag + ")", coh, 1e-9,
                  "minimum system-pair population " + fmt("%.6f", pop) +
                      "; excitations hop into the environment pair");
    }

    const double delta = 0.3;
    const CouplingMatrix detuned(w.matrix() + delta * CMatrix::Identity(2, 2));
    const auto drift = susy_qubit_evolution({QubitSign::Plus, 0, 2}, w, detuned, grid);
    std::vector<double> wrapped;
    for (const auto& s : drift) wrapped.push_back(s.relative_phase);
    const auto unwrapped = unwrap_phases(wrapped);
    bool monotone = true;
    for (std::size_t i = 1; i < unwrapped.size(); ++i) monotone = monotone && unwrapped[i] < unwrapped[i - 1];
    const double rate = (unwrapped.back() - unwrapped.front()) / (grid.times.back() - grid.times.front());
    rec.explore("detuned spectra (omega_F = omega_B + 0.3): relative phase drift rate", rate,
                std::string(monotone ? "monotone" : "not monotone") + ", expected -delta/2 = " + fmt("%.3f", -delta / 2));

    const CouplingMatrix wf(random_hermitian(2, rng));
    const auto general = susy_qubit_evolution({QubitSign::Plus, 0, 2}, w, wf, grid);
    double gphase = 0.0;
    for (const auto& s : general)
        gphase = std::max(gphase, std::abs(wrap_phase(s.relative_phase - general.front().relative_phase)));
    rec.explore("unrelated boson and fermion couplings: max relative-phase excursion", gphase);
}

}  // namespace

VerifyReport verify(Suite suite) {
    VerifyReport report;
    if (suite == Suite::Algebra || suite == Suite::All) algebra_suite(report);
    if (suite == Suite::Oracle || suite == Suite::All) oracle_suite(report);
    if (suite == Suite::Dfs || suite == Suite::All) dfs_suite(report);
    if (suite == Suite::Susy || suite == Suite::All) susy_suite(report);
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
    for (const auto& c : report.checks) {
        const char* status = !c.asserted ? "INFO" : c.passed ? "PASS" : "FAIL";
        char line[96];
        if (c.asserted)
            std::snprintf(line, sizeof line, "%.3e %s %.0e", c.residual,
                          c.above ? (c.passed ? ">" : "<=") : (c.passed ? "<" : ">="), c.tolerance);
        else
            std::snprintf(line, sizeof line, "%.6g", c.residual);
        out << '[' << status << "] " << c.suite << ": " << c.name << "  (" << line << ')';
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
    }
    for (const auto& t : report.tables) out << '\n' << t;
    const auto failed = std::ranges::count_if(report.checks, [](const Check& c) { return c.asserted && !c.passed; });
    out << '\n' << (failed == 0 ? "all asserted checks passed" : std::to_string(failed) + " asserted check(s) failed")
        << '\n';
}

}  // namespace sdfs

// quasiparticle.cpp

#include "sdfs/quasiparticle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sdfs {

namespace {

constexpr double kTieTol = 1e-12;

Eigen::Index dominant_index(const CVector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= peak - kTieTol) return i;
    return 0;
}

SiteMap default_sites(std::size_t n, std::size_t first = 0) {
    SiteMap s(n);
    std::iota(s.begin(), s.end(), first);
    return s;
}

using SparseState = std::map<Occupations, Complex>;

// One creation-operator image: site -> coefficient.
using CreationRow = std::vector<std::pair<std::size_t, Complex>>;

int parity_before(const NetworkSpec& spec, const Occupations& occ, std::size_t site) {
    int p = 0;
    for (std::size_t k = 0; k < site; ++k)
        if (spec.mode(k).is_fermion()) p ^= occ[k] & 1;
    return p;
}

// Applies sum_k row[k] a_k+ with no boson ceiling.
SparseState create_combination(const NetworkSpec& spec, const SparseState& in, const CreationRow& row,
                               FermionRep rep) {
    SparseState out;
    for (const auto& [occ, amp] : in) {
        for (const auto& [site, c] : row) {
            Occupations next = occ;
            Complex coef = amp * c;
            if (spec.mode(site).is_boson()) {
                coef *= std::sqrt(static_cast<double>(next[site] + 1));
                ++next[site];
            } else {
                if (next[site] == 1) continue;
                if (rep == FermionRep::StringCorrected && parity_before(spec, next, site)) coef = -coef;
                next[site] = 1;
            }
            out[next] += coef;
        }
    }
    return out;
}

}  // namespace

// --------------------------- diagonalization ---------------------------------

QuasiBasis diagonalize_coupling(const CMatrix& coupling, SiteMap sites) {
    if (coupling.rows() != coupling.cols() || coupling.rows() == 0)
        throw std::invalid_argument("diagonalize_coupling: coupling must be square and non-empty");
    if (hermiticity_defect(coupling) > 1e-12) throw std::invalid_argument("diagonalize_coupling: non-Hermitian input");
    const auto n = coupling.rows();
    if (sites.empty()) sites = default_sites(static_cast<std::size_t>(n));
    if (sites.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("diagonalize_coupling: site map size mismatch");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(coupling);
    if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize_coupling: eigensolver failed");

    struct Column {
        double value;
        Eigen::Index lead;
        CVector vec;
    };
    std::vector<Column> cols;
    for (Eigen::Index k = 0; k < n; ++k) {
        CVector v = solver.eigenvectors().col(k);
        const Eigen::Index lead = dominant_index(v);
        v *= std::conj(v(lead)) / std::abs(v(lead));
        v(lead) = std::abs(v(lead));
        cols.push_back({solver.eigenvalues()(k), lead, std::move(v)});
    }
    std::stable_sort(cols.begin(), cols.end(), [](const Column& a, const Column& b) {
        if (std::abs(a.value - b.value) > kTieTol) return a.value < b.value;
        return a.lead < b.lead;
    });

    QuasiBasis out;
    out.u.resize(n, n);
    out.omega.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.u.col(k) = cols[static_cast<std::size_t>(k)].vec;
        out.omega(k) = cols[static_cast<std::size_t>(k)].value;
    }
    out.sites = std::move(sites);
    return out;
}

QuasiBasis diagonalize_coupling(const CouplingMatrix& coupling, SiteMap sites) {
    return diagonalize_coupling(coupling.matrix(), std::move(sites));
}

BlockQuasiBasis block_diagonalize(const CouplingMatrix& boson_coupling, const CouplingMatrix& fermion_coupling,
                                  SiteMap boson_sites, SiteMap fermion_sites) {
    if (boson_sites.empty()) boson_sites = default_sites(boson_coupling.size());
    if (fermion_sites.empty()) fermion_sites = default_sites(fermion_coupling.size(), boson_coupling.size());
    return BlockQuasiBasis{diagonalize_coupling(boson_coupling, std::move(boson_sites)),
                           diagonalize_coupling(fermion_coupling, std::move(fermion_sites))};
}

double unitarity_defect(const QuasiBasis& basis) {
    const auto n = basis.u.cols();
    return (basis.u.adjoint() * basis.u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

double diagonalization_residual(const QuasiBasis& basis, const CouplingMatrix& coupling) {
    const CMatrix d = basis.u.adjoint() * coupling.matrix() * basis.u;
    return (d - CMatrix(basis.omega.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff();
}

// --------------------------- mode transforms ---------------------------------

ModeTransform::ModeTransform(const QuasiBasis& basis) : ModeTransform(std::vector<QuasiBasis>{basis}) {}

ModeTransform::ModeTransform(const BlockQuasiBasis& basis)
    : ModeTransform(std::vector<QuasiBasis>{basis.boson, basis.fermion}) {}

ModeTransform::ModeTransform(std::vector<QuasiBasis> blocks) : blocks_(std::move(blocks)) {
    std::set<std::size_t> seen;
    for (const auto& b : blocks_) {
        if (b.u.rows() != b.u.cols() || static_cast<std::size_t>(b.u.rows()) != b.sites.size() ||
            static_cast<std::size_t>(b.omega.size()) != b.sites.size())
            throw std::invalid_argument("ModeTransform: inconsistent block shape");
        for (std::size_t s : b.sites)
            if (!seen.insert(s).second) throw std::invalid_argument("ModeTransform: blocks overlap");
    }
}

double ModeTransform::quasi_energy(const Occupations& occ) const {
    double e = 0.0;
    for (const auto& b : blocks_)
        for (std::size_t k = 0; k < b.sites.size(); ++k) e += b.omega(static_cast<Eigen::Index>(k)) * occ[b.sites[k]];
    return e;
}

TransformResult transform_state(const StateVector& state, const ModeTransform& basis, Direction dir,
                                const TransformOptions& opts) {
    const NetworkSpec& src = state.spec();
    const std::size_t n = src.size();

    // creation image of every source site
    std::vector<CreationRow> rows(n);
    std::vector<int> block_of(n, -1);
    for (std::size_t s = 0; s < n; ++s) rows[s] = {{s, Complex{1.0}}};
    for (std::size_t bi = 0; bi < basis.blocks().size(); ++bi) {
        const QuasiBasis& b = basis.blocks()[bi];
        const ModeKind kind = src.mode(b.sites.at(0)).kind;
        for (std::size_t s : b.sites) {
            if (s >= n) throw std::invalid_argument("transform_state: block site out of range");
            if (src.mode(s).kind != kind) throw std::invalid_argument("transform_state: block mixes mode kinds");
            block_of[s] = static_cast<int>(bi);
        }
        for (std::size_t i = 0; i < b.sites.size(); ++i) {
            CreationRow row;
            for (std::size_t k = 0; k < b.sites.size(); ++k) {
                const Complex uik = b.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                // ToQuasi expands b_i+ over q_k+; FromQuasi expands q_i+ over b_k+.
                const Complex c = dir == Direction::ToQuasi
                                      ? std::conj(uik)
                                      : b.u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
                if (std::abs(c) > 0.0) row.emplace_back(b.sites[k], c);
            }
            rows[b.sites[i]] = std::move(row);
        }
    }

    // Exact image on an unbounded occupation lattice.
    SparseState image;
    std::vector<int> block_bosons_max(basis.blocks().size(), 0);
    for (std::size_t r = 0; r < src.total_dim(); ++r) {
        const Complex amp = state.amplitudes()(static_cast<Eigen::Index>(r));
        if (amp == Complex{0.0}) continue;
        const Occupations ket = src.ket(r);

        std::vector<int> block_count(basis.blocks().size(), 0);
        int in_blocks = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (block_of[s] < 0) continue;
            block_count[static_cast<std::size_t>(block_of[s])] += ket[s];
            in_blocks += ket[s];
        }
        if (in_blocks > 2 && !opts.allow_multi_excitation)
            throw std::invalid_argument("transform_state: ket " + to_string(ket) +
                                        " has more than two excitations; set allow_multi_excitation");
        for (std::size_t bi = 0; bi < block_count.size(); ++bi) {
            const bool fermionic = src.mode(basis.blocks()[bi].sites.at(0)).is_fermion();
            if (fermionic && opts.rep == FermionRep::SpinTensor && block_count[bi] > 1)
                throw std::invalid_argument(
                    "transform_state: SpinTensor fermion blocks support at most one excitation per block");
            if (!fermionic) block_bosons_max[bi] = std::max(block_bosons_max[bi], block_count[bi]);
        }

        SparseState partial{{src.vacuum(), amp}};
        for (std::size_t s = n; s-- > 0;) {
            for (int c = 0; c < ket[s]; ++c) partial = create_combination(src, partial, rows[s], opts.rep);
            if (src.mode(s).is_boson() && ket[s] > 1) {
                double fact = 1.0;
                for (int c = 2; c <= ket[s]; ++c) fact *= c;
                for (auto& [occ, v] : partial) v /= std::sqrt(fact);
            }
        }
        for (const auto& [occ, v] : partial) image[occ] += v;
    }

    auto discarded_norm = [&](const NetworkSpec& target) {
        double lost = 0.0;
        for (const auto& [occ, v] : image)
            if (!target.contains(occ)) lost += std::norm(v);
        return std::sqrt(lost);
    };
    auto with_block_cutoff = [&](int cutoff) {
        std::vector<ModeSpec> modes(src.modes().begin(), src.modes().end());
        for (std::size_t s = 0; s < n; ++s)
            if (block_of[s] >= 0 && modes[s].is_boson()) modes[s].cutoff = cutoff;
        return NetworkSpec(std::move(modes));
    };

    int used_cutoff = 0;
    NetworkSpec target;
    if (opts.target) {
        target = *opts.target;
        if (target.size() != n) throw std::invalid_argument("transform_state: target network has the wrong size");
        for (std::size_t s = 0; s < n; ++s)
            if (target.mode(s).kind != src.mode(s).kind)
                throw std::invalid_argument("transform_state: target network changes a mode kind");
        for (std::size_t s = 0; s < n; ++s)
            if (block_of[s] >= 0 && target.mode(s).is_boson()) used_cutoff = std::max(used_cutoff, target.mode(s).cutoff);
    } else {
        bool has_block_bosons = false;
        for (std::size_t s = 0; s < n; ++s) has_block_bosons = has_block_bosons || (block_of[s] >= 0 && src.mode(s).is_boson());
        if (has_block_bosons) {
            const int kmax = std::max(1, *std::max_element(block_bosons_max.begin(), block_bosons_max.end()));
            used_cutoff = kmax;
            for (int c = 1; c < kmax; ++c) {
                if (discarded_norm(with_block_cutoff(c)) < opts.leakage_tol) {
                    used_cutoff = c;
                    break;
                }
            }
            target = with_block_cutoff(used_cutoff);
        } else {
            target = src;
        }
    }

    const double leakage = discarded_norm(target);
    if (opts.throw_on_leakage && leakage > opts.leakage_tol)
        throw TransformError("transform_state: transformed image exceeds the target cutoff (discarded norm " +
                             std::to_string(leakage) + ")");

    CVector amps = CVector::Zero(static_cast<Eigen::Index>(target.total_dim()));
    for (const auto& [occ, v] : image)
        if (target.contains(occ)) amps(static_cast<Eigen::Index>(target.rank(occ))) += v;
    return TransformResult{StateVector(target, std::move(amps)), used_cutoff, leakage};
}

}  // namespace sdfs

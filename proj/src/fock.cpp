// fock.cpp - Occupation basis bookkeeping and the single-ket operator kernel

#include "sdfs/fock.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace sdfs {

// --------------------------- modes and networks ------------------------------

ModeSpec ModeSpec::boson(int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("ModeSpec::boson: cutoff must be >= 1");
    return ModeSpec{ModeKind::Boson, cutoff};
}

NetworkSpec::NetworkSpec(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw std::invalid_argument("NetworkSpec: at least one mode required");
    for (const auto& m : modes_) {
        if (m.is_boson() && m.cutoff < 1)
            throw std::invalid_argument("NetworkSpec: boson cutoff must be >= 1");
        if (m.is_fermion() && m.cutoff != 1)
            throw std::invalid_argument("NetworkSpec: fermion modes have local dimension 2");
    }
    strides_.assign(modes_.size(), 1);
    std::size_t stride = 1;
    for (std::size_t i = modes_.size(); i-- > 0;) {
        strides_[i] = stride;
        stride *= modes_[i].local_dim();
    }
    total_dim_ = stride;
}

NetworkSpec NetworkSpec::bosons(std::size_t n, int cutoff) {
    return NetworkSpec(std::vector<ModeSpec>(n, ModeSpec::boson(cutoff)));
}

NetworkSpec NetworkSpec::fermions(std::size_t n) {
    return NetworkSpec(std::vector<ModeSpec>(n, ModeSpec::fermion()));
}

std::vector<std::size_t> NetworkSpec::sites_of(ModeKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (modes_[i].kind == kind) out.push_back(i);
    return out;
}

bool NetworkSpec::contains(const Occupations& occ) const noexcept {
    if (occ.size() != modes_.size()) return false;
    for (std::size_t i = 0; i < occ.size(); ++i)
        if (occ[i] < 0 || occ[i] > modes_[i].cutoff) return false;
    return true;
}

std::size_t NetworkSpec::rank(const Occupations& occ) const {
    if (!contains(occ)) throw std::out_of_range("NetworkSpec::rank: ket " + to_string(occ) + " outside the network");
    std::size_t r = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) r += static_cast<std::size_t>(occ[i]) * strides_[i];
    return r;
}

Occupations NetworkSpec::ket(std::size_t rank) const {
    if (rank >= total_dim_) throw std::out_of_range("NetworkSpec::ket: rank out of range");
    Occupations occ(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        occ[i] = static_cast<int>(rank / strides_[i]);
        rank %= strides_[i];
    }
    return occ;
}

std::vector<Occupations> enumerate_basis(const NetworkSpec& spec) {
    std::vector<Occupations> out;
    out.reserve(spec.total_dim());
    for (std::size_t r = 0; r < spec.total_dim(); ++r) out.push_back(spec.ket(r));
    return out;
}

std::string to_string(const Occupations& occ) {
    std::ostringstream os;
    bool wide = false;
    for (int n : occ) wide = wide || n > 9;
    os << '|';
    for (std::size_t i = 0; i < occ.size(); ++i) os << (wide && i ? "," : "") << occ[i];
    os << '>';
    return os.str();
}

// --------------------------- state vectors -----------------------------------

StateVector::StateVector(NetworkSpec spec, CVector amplitudes)
    : spec_(std::make_shared<const NetworkSpec>(std::move(spec))), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != spec_->total_dim())
        throw std::invalid_argument("StateVector: amplitude count does not match network dimension");
}

StateVector StateVector::zero(NetworkSpec spec) {
    const auto dim = static_cast<Eigen::Index>(spec.total_dim());
    return StateVector(std::move(spec), CVector::Zero(dim));
}

StateVector StateVector::basis(NetworkSpec spec, const Occupations& occ) {
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
    amps(static_cast<Eigen::Index>(spec.rank(occ))) = 1.0;
    return StateVector(std::move(spec), std::move(amps));
}

StateVector StateVector::vacuum(NetworkSpec spec) {
    auto occ = spec.vacuum();
    return basis(std::move(spec), occ);
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("StateVector::normalized: zero vector");
    return StateVector(*spec_, amplitudes_ / n);
}

Complex StateVector::inner(const StateVector& other) const {
    if (!(spec() == other.spec())) throw std::invalid_argument("StateVector::inner: network mismatch");
    return amplitudes_.dot(other.amplitudes_);
}

StateVector StateVector::operator+(const StateVector& other) const {
    if (!(spec() == other.spec())) throw std::invalid_argument("StateVector: network mismatch");
    return StateVector(*spec_, amplitudes_ + other.amplitudes_);
}

StateVector StateVector::operator-(const StateVector& other) const {
    if (!(spec() == other.spec())) throw std::invalid_argument("StateVector: network mismatch");
    return StateVector(*spec_, amplitudes_ - other.amplitudes_);
}

StateVector StateVector::operator*(Complex c) const { return StateVector(*spec_, amplitudes_ * c); }

// --------------------------- operator sums -----------------------------------

Factor pauli(std::size_t site, PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return {site, OpKind::PauliX};
        case PauliAxis::Y: return {site, OpKind::PauliY};
        case PauliAxis::Z: return {site, OpKind::PauliZ};
    }
    throw std::invalid_argument("pauli: bad axis");
}

OperatorSum OperatorSum::identity(Complex weight) { return single(weight, {}); }

OperatorSum OperatorSum::single(Complex weight, std::vector<Factor> factors) {
    OperatorSum s;
    s.add(weight, std::move(factors));
    return s;
}

void OperatorSum::add(Complex weight, std::vector<Factor> factors) {
    if (weight == Complex{0.0}) return;
    terms_.push_back(Term{weight, std::move(factors)});
}

void OperatorSum::append(const OperatorSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

OperatorSum OperatorSum::adjoint() const {
    OperatorSum out;
    for (const auto& t : terms_) {
        Term a{std::conj(t.weight), {}};
        a.factors.reserve(t.factors.size());
        for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
            Factor f = *it;
            if (f.op == OpKind::Create) f.op = OpKind::Annihilate;
            else if (f.op == OpKind::Annihilate) f.op = OpKind::Create;
            a.factors.push_back(f);
        }
        out.terms_.push_back(std::move(a));
    }
    return out;
}

OperatorSum OperatorSum::operator+(const OperatorSum& other) const {
    OperatorSum out = *this;
    out.append(other);
    return out;
}

OperatorSum OperatorSum::operator-(const OperatorSum& other) const { return *this + other * Complex{-1.0}; }

OperatorSum OperatorSum::operator*(Complex c) const {
    OperatorSum out;
    for (const auto& t : terms_) out.add(t.weight * c, t.factors);
    return out;
}

OperatorSum OperatorSum::operator*(const OperatorSum& other) const {
    OperatorSum out;
    for (const auto& l : terms_) {
        for (const auto& r : other.terms_) {
            std::vector<Factor> f = l.factors;
            f.insert(f.end(), r.factors.begin(), r.factors.end());
            out.add(l.weight * r.weight, std::move(f));
        }
    }
    return out;
}

void validate(const NetworkSpec& spec, const OperatorSum& op) {
    for (std::size_t t = 0; t < op.terms().size(); ++t) {
        for (const auto& f : op.terms()[t].factors) {
            if (f.site >= spec.size())
                throw std::invalid_argument("operator term " + std::to_string(t) + ": site " +
                                            std::to_string(f.site) + " out of range");
            const bool is_pauli = f.op == OpKind::PauliX || f.op == OpKind::PauliY || f.op == OpKind::PauliZ;
            if (is_pauli && spec.mode(f.site).is_boson())
                throw std::invalid_argument("operator term " + std::to_string(t) + ": Pauli factor on bosonic site " +
                                            std::to_string(f.site));
        }
    }
}

// --------------------------- single-ket kernel -------------------------------

namespace {

int preceding_fermion_parity(const NetworkSpec& spec, const Occupations& occ, std::size_t site) {
    int parity = 0;
    for (std::size_t k = 0; k < site; ++k)
        if (spec.mode(k).is_fermion()) parity ^= (occ[k] & 1);
    return parity;
}

// Acts with one factor on a ket in place, accumulating the matrix element into
// coef. Returns false when the image vanishes. With relax the boson ceiling is
// lifted and excursions past it are flagged in left_box.
bool act(const NetworkSpec& spec, Occupations& occ, const Factor& f, FermionRep rep, Complex& coef, bool relax,
         bool& left_box) {
    const ModeSpec& m = spec.mode(f.site);
    int& n = occ[f.site];
    if (m.is_boson()) {
        switch (f.op) {
            case OpKind::Create:
                if (n >= m.cutoff) {
                    if (!relax) return false;
                    left_box = true;
                }
                coef *= std::sqrt(static_cast<double>(n + 1));
                ++n;
                return true;
            case OpKind::Annihilate:
                if (n == 0) return false;
                coef *= std::sqrt(static_cast<double>(n));
                --n;
                return true;
            case OpKind::Number:
                coef *= static_cast<double>(n);
                return n != 0;
            default:
                throw std::invalid_argument("Pauli factor on bosonic site " + std::to_string(f.site));
        }
    }
    switch (f.op) {
        case OpKind::Create:
        case OpKind::Annihilate: {
            const bool raise = f.op == OpKind::Create;
            if ((raise && n == 1) || (!raise && n == 0)) return false;
            if (rep == FermionRep::StringCorrected && preceding_fermion_parity(spec, occ, f.site)) coef = -coef;
            n = raise ? 1 : 0;
            return true;
        }
        case OpKind::Number:
            return n == 1;
        case OpKind::PauliX:
            n ^= 1;
            return true;
        case OpKind::PauliY:
            // |0> -> -i|1>, |1> -> +i|0>  (|1> first reproduces the textbook matrix)
            coef *= (n == 0) ? -kI : kI;
            n ^= 1;
            return true;
        case OpKind::PauliZ:
            if (n == 0) coef = -coef;
            return true;
    }
    return false;
}

bool act_term(const NetworkSpec& spec, Occupations& occ, const Term& term, FermionRep rep, Complex& coef,
              bool relax, bool& left_box) {
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        if (!act(spec, occ, *it, rep, coef, relax, left_box)) return false;
    }
    return true;
}

}  // namespace

StateVector apply_ladder(const StateVector& state, std::size_t site, Ladder which, FermionRep rep) {
    if (site >= state.spec().size()) throw std::out_of_range("apply_ladder: site out of range");
    return apply(OperatorSum::single(1.0, {{site, which == Ladder::Create ? OpKind::Create : OpKind::Annihilate}}),
                 state, rep);
}

StateVector apply_pauli(const StateVector& state, std::size_t site, PauliAxis axis) {
    if (site >= state.spec().size()) throw std::out_of_range("apply_pauli: site out of range");
    if (state.spec().mode(site).is_boson()) throw std::invalid_argument("apply_pauli: site is bosonic");
    return apply(OperatorSum::single(1.0, {pauli(site, axis)}), state, FermionRep::SpinTensor);
}

StateVector apply(const OperatorSum& op, const StateVector& state, FermionRep rep) {
    const NetworkSpec& spec = state.spec();
    validate(spec, op);
    CVector out = CVector::Zero(state.amplitudes().size());
    bool unused = false;
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Complex a = state.amplitudes()(static_cast<Eigen::Index>(r));
        if (a == Complex{0.0}) continue;
        const Occupations ket = spec.ket(r);
        for (const auto& term : op.terms()) {
            Occupations occ = ket;
            Complex coef = term.weight * a;
            if (act_term(spec, occ, term, rep, coef, false, unused))
                out(static_cast<Eigen::Index>(spec.rank(occ))) += coef;
        }
    }
    return StateVector(spec, std::move(out));
}

CMatrix operator_matrix(const NetworkSpec& spec, const OperatorSum& op, FermionRep rep) {
    validate(spec, op);
    const auto dim = static_cast<Eigen::Index>(spec.total_dim());
    CMatrix m = CMatrix::Zero(dim, dim);
    bool unused = false;
    for (Eigen::Index c = 0; c < dim; ++c) {
        const Occupations ket = spec.ket(static_cast<std::size_t>(c));
        for (const auto& term : op.terms()) {
            Occupations occ = ket;
            Complex coef = term.weight;
            if (act_term(spec, occ, term, rep, coef, false, unused))
                m(static_cast<Eigen::Index>(spec.rank(occ)), c) += coef;
        }
    }
    return m;
}

Complex expectation(const StateVector& state, const OperatorSum& op, FermionRep rep) {
    return state.inner(apply(op, state, rep));
}

Complex expectation(const StateVector& state, const CMatrix& op) {
    if (op.rows() != state.amplitudes().size() || op.cols() != state.amplitudes().size())
        throw std::invalid_argument("expectation: dimension mismatch");
    return state.amplitudes().dot(op * state.amplitudes());
}

double truncation_flux(const StateVector& state, const OperatorSum& op, FermionRep rep) {
    const NetworkSpec& spec = state.spec();
    validate(spec, op);
    std::map<Occupations, Complex> lost;
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Complex a = state.amplitudes()(static_cast<Eigen::Index>(r));
        if (a == Complex{0.0}) continue;
        const Occupations ket = spec.ket(r);
        for (const auto& term : op.terms()) {
            Occupations occ = ket;
            Complex coef = term.weight * a;
            bool left_box = false;
            if (act_term(spec, occ, term, rep, coef, true, left_box) && left_box) lost[occ] += coef;
        }
    }
    double sq = 0.0;
    for (const auto& [occ, v] : lost) sq += std::norm(v);
    return std::sqrt(sq);
}

double hermiticity_defect(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace sdfs

// fock.hpp - Truncated Fock spaces, occupation kets and second-quantized operator algebra

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sdfs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// --------------------------- modes and networks ------------------------------

enum class ModeKind { Boson, Fermion };

// A single oscillator position. Bosons carry occupations 0..cutoff, fermions 0..1.
struct ModeSpec {
    ModeKind kind{ModeKind::Fermion};
    int cutoff{1};

    static ModeSpec boson(int cutoff);
    static ModeSpec fermion() { return ModeSpec{ModeKind::Fermion, 1}; }

    std::size_t local_dim() const noexcept { return static_cast<std::size_t>(cutoff) + 1; }
    bool is_boson() const noexcept { return kind == ModeKind::Boson; }
    bool is_fermion() const noexcept { return kind == ModeKind::Fermion; }

    friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

// Occupation numbers n_i, one per mode. All zeros is the vacuum.
using Occupations = std::vector<int>;

// Ordered list of modes. Basis kets are ranked lexicographically with mode 0 the
// most significant digit and occupations ascending.
class NetworkSpec {
public:
    NetworkSpec() = default;
    explicit NetworkSpec(std::vector<ModeSpec> modes);

    static NetworkSpec bosons(std::size_t n, int cutoff);
    static NetworkSpec fermions(std::size_t n);

    std::size_t size() const noexcept { return modes_.size(); }
    std::size_t total_dim() const noexcept { return total_dim_; }
    const ModeSpec& mode(std::size_t site) const { return modes_.at(site); }
    std::span<const ModeSpec> modes() const noexcept { return modes_; }
    std::size_t stride(std::size_t site) const { return strides_.at(site); }

    std::vector<std::size_t> sites_of(ModeKind kind) const;

    bool contains(const Occupations& occ) const noexcept;
    std::size_t rank(const Occupations& occ) const;
    Occupations ket(std::size_t rank) const;
    Occupations vacuum() const { return Occupations(modes_.size(), 0); }

    friend bool operator==(const NetworkSpec& a, const NetworkSpec& b) { return a.modes_ == b.modes_; }

private:
    std::vector<ModeSpec> modes_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_{0};
};

std::vector<Occupations> enumerate_basis(const NetworkSpec& spec);

std::string to_string(const Occupations& occ);

// --------------------------- state vectors -----------------------------------

// Dense amplitude vector over the ranked occupation basis. The zero vector is a
// legal value (an annihilated state).
class StateVector {
public:
    StateVector(NetworkSpec spec, CVector amplitudes);

    static StateVector zero(NetworkSpec spec);
    static StateVector basis(NetworkSpec spec, const Occupations& occ);
    static StateVector vacuum(NetworkSpec spec);

    const NetworkSpec& spec() const noexcept { return *spec_; }
    const CVector& amplitudes() const noexcept { return amplitudes_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

    Complex amplitude(const Occupations& occ) const { return amplitudes_(static_cast<Eigen::Index>(spec_->rank(occ))); }
    double norm() const { return amplitudes_.norm(); }
    bool is_zero(double tol = 1e-14) const { return amplitudes_.norm() <= tol; }
    StateVector normalized() const;

    // <this|other>
    Complex inner(const StateVector& other) const;

    StateVector operator+(const StateVector& other) const;
    StateVector operator-(const StateVector& other) const;
    StateVector operator*(Complex c) const;
    friend StateVector operator*(Complex c, const StateVector& s) { return s * c; }

private:
    std::shared_ptr<const NetworkSpec> spec_;
    CVector amplitudes_;
};

// --------------------------- operators ---------------------------------------

// SpinTensor: per-site operators commute across sites (plain tensor factors).
// StringCorrected: fermion ladder operators carry the parity sign of all
// preceding fermionic modes, so {f_i, f_j+} = delta_ij exactly.
enum class FermionRep { SpinTensor, StringCorrected };

enum class Ladder { Create, Annihilate };
enum class PauliAxis { X, Y, Z };

enum class OpKind { Create, Annihilate, Number, PauliX, PauliY, PauliZ };

struct Factor {
    std::size_t site{0};
    OpKind op{OpKind::Number};
    friend bool operator==(const Factor&, const Factor&) = default;
};

inline Factor create(std::size_t site) { return {site, OpKind::Create}; }
inline Factor annihilate(std::size_t site) { return {site, OpKind::Annihilate}; }
inline Factor number(std::size_t site) { return {site, OpKind::Number}; }
Factor pauli(std::size_t site, PauliAxis axis);

// weight * F_1 F_2 ... F_k, written left to right; F_k acts first. An empty
// product is the identity.
struct Term {
    Complex weight{1.0};
    std::vector<Factor> factors;
    friend bool operator==(const Term&, const Term&) = default;
};

// Symbolic sum of weighted operator products over a network.
class OperatorSum {
public:
    OperatorSum() = default;
    explicit OperatorSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

    static OperatorSum identity(Complex weight = 1.0);
    static OperatorSum single(Complex weight, std::vector<Factor> factors);

    void add(Complex weight, std::vector<Factor> factors);
    void append(const OperatorSum& other);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    OperatorSum adjoint() const;
    OperatorSum operator+(const OperatorSum& other) const;
    OperatorSum operator-(const OperatorSum& other) const;
    OperatorSum operator*(Complex c) const;
    OperatorSum operator*(const OperatorSum& other) const;
    friend OperatorSum operator*(Complex c, const OperatorSum& op) { return op * c; }

    friend bool operator==(const OperatorSum&, const OperatorSum&) = default;

private:
    std::vector<Term> terms_;
};

// Throws std::invalid_argument when a factor references a missing site or a
// Pauli factor sits on a bosonic mode.
void validate(const NetworkSpec& spec, const OperatorSum& op);

StateVector apply_ladder(const StateVector& state, std::size_t site, Ladder which, FermionRep rep);
StateVector apply_pauli(const StateVector& state, std::size_t site, PauliAxis axis);
StateVector apply(const OperatorSum& op, const StateVector& state, FermionRep rep);

CMatrix operator_matrix(const NetworkSpec& spec, const OperatorSum& op, FermionRep rep);

Complex expectation(const StateVector& state, const OperatorSum& op, FermionRep rep);
Complex expectation(const StateVector& state, const CMatrix& op);

// Norm of (O_untruncated - O_truncated)|psi>: the amplitude a boson cutoff
// discards when O acts on psi. Zero means the truncation is invisible to O.
double truncation_flux(const StateVector& state, const OperatorSum& op, FermionRep rep);

// Max-norm of M - M^dagger.
double hermiticity_defect(const CMatrix& m);

}  // namespace sdfs

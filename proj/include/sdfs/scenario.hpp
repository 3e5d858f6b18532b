// scenario.hpp - Scenario files: the JSON description of one simulation run
//
// Loading validates every field and reports failures with a dotted field path,
// e.g. "couplings.boson.sites[2]". Unknown keys are errors.

#pragma once

#include "sdfs/evolution.hpp"
#include "sdfs/fock.hpp"
#include "sdfs/hamiltonians.hpp"
#include "sdfs/susy.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdfs {

inline constexpr int kScenarioSchemaVersion = 1;

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct BosonBlock {
    std::vector<std::size_t> sites;
    CouplingMatrix matrix;
    friend bool operator==(const BosonBlock&, const BosonBlock&) = default;
};

enum class FermionForm { Ladder, Spin };

struct LinkAxis {
    std::size_t i{0};
    std::size_t j{0};
    PauliAxis axis{PauliAxis::Z};
    friend bool operator==(const LinkAxis&, const LinkAxis&) = default;
};

struct FermionBlock {
    std::vector<std::size_t> sites;
    CouplingMatrix matrix;
    FermionForm form{FermionForm::Ladder};
    std::vector<LinkAxis> axes;  // spin form only; indices into sites
    friend bool operator==(const FermionBlock&, const FermionBlock&) = default;
};

struct Couplings {
    std::optional<BosonBlock> boson;
    std::optional<FermionBlock> fermion;
    std::vector<MixedPair> mixed;
    std::vector<DephasingLink> dephasing;
    friend bool operator==(const Couplings&, const Couplings&);
};

enum class InitialKind { Vacuum, Singlet, Triplet, SusyQubit, Amplitudes };

struct KetAmplitude {
    Occupations ket;
    Complex amplitude;
    friend bool operator==(const KetAmplitude&, const KetAmplitude&) = default;
};

// Single-site factor (amplitude of |0>, amplitude of |1>) placed on a fermion
// mode outside the named system state.
struct ProductFactor {
    std::size_t site{0};
    Complex a0{1.0};
    Complex a1{0.0};
    friend bool operator==(const ProductFactor&, const ProductFactor&) = default;
};

struct InitialState {
    InitialKind kind{InitialKind::Vacuum};
    std::vector<std::size_t> sites;  // singlet/triplet: (i, j); susy_qubit: (boson, fermion)
    QubitSign sign{QubitSign::Plus};
    std::vector<KetAmplitude> amplitudes;
    std::vector<ProductFactor> product;
    friend bool operator==(const InitialState&, const InitialState&) = default;
};

enum class EngineKind { Quasi, Dense, PhaseKick };

enum class ObservableKind { Coherence, RelativePhase, Expectation };

struct ObservableSpec {
    std::string id;
    ObservableKind kind{ObservableKind::Coherence};
    std::vector<std::size_t> sites;  // reduced subsystem, ascending
    Occupations ket_a, ket_b;        // over `sites`
    OperatorSum op;                  // expectation only
    friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;
};

struct PhaseKickSpec {
    KickDistribution distribution{KickDistribution::Gaussian};
    double width{0.1};
    double kicks_per_unit_time{1.0};
    std::size_t samples{1000};
    friend bool operator==(const PhaseKickSpec&, const PhaseKickSpec&) = default;
};

struct Scenario {
    int schema{kScenarioSchemaVersion};
    std::string name;
    std::vector<ModeSpec> network;
    FermionRep representation{FermionRep::StringCorrected};
    Couplings couplings;
    InitialState initial;
    EngineKind engine{EngineKind::Dense};
    std::vector<double> times;
    std::vector<ObservableSpec> observables;
    std::uint64_t seed{0};
    std::optional<PhaseKickSpec> phase_kick;
    bool allow_multi_excitation{false};  // quasi engine: states with > 2 block excitations

    NetworkSpec spec() const { return NetworkSpec(network); }
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
// Canonical text form; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

// Cross-field checks shared by the loader and programmatic callers.
void validate_scenario(const Scenario& s);

// Hamiltonian assembled from every coupling block.
HamiltonianSum scenario_hamiltonian(const Scenario& s);
StateVector scenario_initial_state(const Scenario& s);

std::string to_string(EngineKind e);

}  // namespace sdfs

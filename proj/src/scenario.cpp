// scenario.cpp

#include "sdfs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace sdfs {

using nlohmann::json;

bool operator==(const Couplings& a, const Couplings& b) {
    auto mixed_eq = [](const MixedPair& x, const MixedPair& y) {
        return x.boson_site == y.boson_site && x.fermion_site == y.fermion_site && x.weight == y.weight;
    };
    auto deph_eq = [](const DephasingLink& x, const DephasingLink& y) {
        return x.system_site == y.system_site && x.env_site == y.env_site && x.weight == y.weight && x.axis == y.axis;
    };
    return a.boson == b.boson && a.fermion == b.fermion &&
           std::ranges::equal(a.mixed, b.mixed, mixed_eq) && std::ranges::equal(a.dephasing, b.dephasing, deph_eq);
}

namespace {

// --------------------------- reading helpers ---------------------------------

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ScenarioError(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }))
            throw ScenarioError(at(path, key), "unknown field");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) throw ScenarioError(at(path, key), "missing required field");
    return obj.at(key);
}

double read_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw ScenarioError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path, "expected a finite number");
    return d;
}

std::uint64_t read_uint(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ScenarioError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

int read_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
    return v.get<int>();
}

std::string read_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ScenarioError(path, "expected a string");
    return v.get<std::string>();
}

// A complex number is either a plain number or [re, im].
Complex read_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {read_double(v, path), 0.0};
    if (v.is_array() && v.size() == 2) return {read_double(v[0], at(path, 0)), read_double(v[1], at(path, 1))};
    throw ScenarioError(path, "expected a number or [re, im]");
}

json write_complex(Complex c) { return json::array({c.real(), c.imag()}); }

const json& read_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ScenarioError(path, "expected an array");
    return v;
}

std::vector<std::size_t> read_sites(const json& v, const std::string& path) {
    std::vector<std::size_t> out;
    const json& arr = read_array(v, path);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_uint(arr[i], at(path, i)));
    return out;
}

Occupations read_ket(const json& v, const std::string& path) {
    Occupations out;
    const json& arr = read_array(v, path);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_int(arr[i], at(path, i)));
    return out;
}

template <typename Enum, std::size_t N>
Enum read_enum(const json& v, const std::string& path, const std::pair<const char*, Enum> (&names)[N]) {
    const std::string s = read_string(v, path);
    for (const auto& [name, value] : names)
        if (s == name) return value;
    std::string allowed;
    for (const auto& [name, _] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw ScenarioError(path, "unknown value \"" + s + "\" (allowed: " + allowed + ")");
}

template <typename Enum, std::size_t N>
std::string enum_name(Enum e, const std::pair<const char*, Enum> (&names)[N]) {
    for (const auto& [name, value] : names)
        if (value == e) return name;
    throw std::logic_error("enum_name: unmapped value");
}

constexpr std::pair<const char*, ModeKind> kModeKinds[] = {{"boson", ModeKind::Boson}, {"fermion", ModeKind::Fermion}};
constexpr std::pair<const char*, FermionRep> kReps[] = {{"string_corrected", FermionRep::StringCorrected},
                                                         {"spin_tensor", FermionRep::SpinTensor}};
constexpr std::pair<const char*, PauliAxis> kAxes[] = {{"x", PauliAxis::X}, {"y", PauliAxis::Y}, {"z", PauliAxis::Z}};
constexpr std::pair<const char*, FermionForm> kForms[] = {{"ladder", FermionForm::Ladder}, {"spin", FermionForm::Spin}};
constexpr std::pair<const char*, InitialKind> kInitial[] = {{"vacuum", InitialKind::Vacuum},
                                                             {"singlet", InitialKind::Singlet},
                                                             {"triplet", InitialKind::Triplet},
                                                             {"susy_qubit", InitialKind::SusyQubit},
                                                             {"amplitudes", InitialKind::Amplitudes}};
constexpr std::pair<const char*, QubitSign> kSigns[] = {{"plus", QubitSign::Plus}, {"minus", QubitSign::Minus}};
constexpr std::pair<const char*, EngineKind> kEngines[] = {
    {"quasi", EngineKind::Quasi}, {"dense", EngineKind::Dense}, {"phase_kick", EngineKind::PhaseKick}};
constexpr std::pair<const char*, ObservableKind> kObservables[] = {{"coherence", ObservableKind::Coherence},
                                                                    {"relative_phase", ObservableKind::RelativePhase},
                                                                    {"expectation", ObservableKind::Expectation}};
constexpr std::pair<const char*, OpKind> kOps[] = {{"create", OpKind::Create}, {"annihilate", OpKind::Annihilate},
                                                    {"number", OpKind::Number}, {"x", OpKind::PauliX},
                                                    {"y", OpKind::PauliY},     {"z", OpKind::PauliZ}};
constexpr std::pair<const char*, KickDistribution> kKicks[] = {{"gaussian", KickDistribution::Gaussian},
                                                                {"uniform", KickDistribution::Uniform}};

CouplingMatrix read_matrix(const json& v, const std::string& path, std::size_t expected) {
    const json& rows = read_array(v, path);
    if (rows.size() != expected)
        throw ScenarioError(path, "expected " + std::to_string(expected) + " rows (one per site)");
    CMatrix m(static_cast<Eigen::Index>(expected), static_cast<Eigen::Index>(expected));
    for (std::size_t r = 0; r < expected; ++r) {
        const json& row = read_array(rows[r], at(path, r));
        if (row.size() != expected) throw ScenarioError(at(path, r), "row length does not match the site count");
        for (std::size_t c = 0; c < expected; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_complex(row[c], at(at(path, r), c));
    }
    try {
        return CouplingMatrix(std::move(m));
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(path, e.what());
    }
}

json write_matrix(const CouplingMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.size(); ++c) row.push_back(write_complex(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

// --------------------------- sections ----------------------------------------

std::vector<ModeSpec> read_network(const json& v, const std::string& path) {
    const json& arr = read_array(v, path);
    if (arr.empty()) throw ScenarioError(path, "network needs at least one mode");
    std::vector<ModeSpec> modes;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = at(path, i);
        check_keys(arr[i], p, {"kind", "cutoff"});
        const ModeKind kind = read_enum(require(arr[i], p, "kind"), at(p, "kind"), kModeKinds);
        if (kind == ModeKind::Fermion) {
            if (arr[i].contains("cutoff") && read_int(arr[i]["cutoff"], at(p, "cutoff")) != 1)
                throw ScenarioError(at(p, "cutoff"), "fermion modes have cutoff 1");
            modes.push_back(ModeSpec::fermion());
        } else {
            const int cutoff = read_int(require(arr[i], p, "cutoff"), at(p, "cutoff"));
            if (cutoff < 1) throw ScenarioError(at(p, "cutoff"), "boson cutoff must be >= 1");
            modes.push_back(ModeSpec::boson(cutoff));
        }
    }
    return modes;
}

Couplings read_couplings(const json& v, const std::string& path) {
    check_keys(v, path, {"boson", "fermion", "mixed", "dephasing"});
    Couplings c;
    if (v.contains("boson")) {
        const std::string p = at(path, "boson");
        check_keys(v["boson"], p, {"sites", "matrix"});
        BosonBlock b;
        b.sites = read_sites(require(v["boson"], p, "sites"), at(p, "sites"));
        b.matrix = read_matrix(require(v["boson"], p, "matrix"), at(p, "matrix"), b.sites.size());
        c.boson = std::move(b);
    }
    if (v.contains("fermion")) {
        const std::string p = at(path, "fermion");
        check_keys(v["fermion"], p, {"sites", "matrix", "form", "axes"});
        FermionBlock f;
        f.sites = read_sites(require(v["fermion"], p, "sites"), at(p, "sites"));
        f.matrix = read_matrix(require(v["fermion"], p, "matrix"), at(p, "matrix"), f.sites.size());
        if (v["fermion"].contains("form")) f.form = read_enum(v["fermion"]["form"], at(p, "form"), kForms);
        if (v["fermion"].contains("axes")) {
            const json& axes = read_array(v["fermion"]["axes"], at(p, "axes"));
            for (std::size_t k = 0; k < axes.size(); ++k) {
                const std::string ap = at(at(p, "axes"), k);
                check_keys(axes[k], ap, {"i", "j", "axis"});
                f.axes.push_back({read_uint(require(axes[k], ap, "i"), at(ap, "i")),
                                  read_uint(require(axes[k], ap, "j"), at(ap, "j")),
                                  read_enum(require(axes[k], ap, "axis"), at(ap, "axis"), kAxes)});
            }
        }
        c.fermion = std::move(f);
    }
    if (v.contains("mixed")) {
        const json& arr = read_array(v["mixed"], at(path, "mixed"));
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = at(at(path, "mixed"), k);
            check_keys(arr[k], p, {"boson", "fermion", "weight"});
            c.mixed.push_back({read_uint(require(arr[k], p, "boson"), at(p, "boson")),
                               read_uint(require(arr[k], p, "fermion"), at(p, "fermion")),
                               read_complex(require(arr[k], p, "weight"), at(p, "weight"))});
        }
    }
    if (v.contains("dephasing")) {
        const json& arr = read_array(v["dephasing"], at(path, "dephasing"));
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = at(at(path, "dephasing"), k);
            check_keys(arr[k], p, {"system", "env", "weight", "axis"});
            DephasingLink link;
            link.system_site = read_uint(require(arr[k], p, "system"), at(p, "system"));
            link.env_site = read_uint(require(arr[k], p, "env"), at(p, "env"));
            link.weight = read_double(require(arr[k], p, "weight"), at(p, "weight"));
            if (arr[k].contains("axis")) link.axis = read_enum(arr[k]["axis"], at(p, "axis"), kAxes);
            c.dephasing.push_back(link);
        }
    }
    return c;
}

InitialState read_initial(const json& v, const std::string& path) {
    check_keys(v, path, {"type", "sites", "sign", "amplitudes", "product"});
    InitialState s;
    s.kind = read_enum(require(v, path, "type"), at(path, "type"), kInitial);
    if (v.contains("sites")) s.sites = read_sites(v["sites"], at(path, "sites"));
    if (v.contains("sign")) s.sign = read_enum(v["sign"], at(path, "sign"), kSigns);
    if (v.contains("amplitudes")) {
        const json& arr = read_array(v["amplitudes"], at(path, "amplitudes"));
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = at(at(path, "amplitudes"), k);
            check_keys(arr[k], p, {"ket", "amplitude"});
            s.amplitudes.push_back({read_ket(require(arr[k], p, "ket"), at(p, "ket")),
                                    read_complex(require(arr[k], p, "amplitude"), at(p, "amplitude"))});
        }
    }
    if (v.contains("product")) {
        const json& arr = read_array(v["product"], at(path, "product"));
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = at(at(path, "product"), k);
            check_keys(arr[k], p, {"site", "amplitudes"});
            const json& amps = read_array(require(arr[k], p, "amplitudes"), at(p, "amplitudes"));
            if (amps.size() != 2) throw ScenarioError(at(p, "amplitudes"), "expected [amp0, amp1]");
            s.product.push_back({read_uint(require(arr[k], p, "site"), at(p, "site")),
                                 read_complex(amps[0], at(at(p, "amplitudes"), 0)),
                                 read_complex(amps[1], at(at(p, "amplitudes"), 1))});
        }
    }
    return s;
}

std::vector<double> read_grid(const json& v, const std::string& path) {
    check_keys(v, path, {"times", "start", "stop", "count"});
    if (v.contains("times")) {
        if (v.contains("start") || v.contains("stop") || v.contains("count"))
            throw ScenarioError(path, "give either times or start/stop/count");
        const json& arr = read_array(v["times"], at(path, "times"));
        std::vector<double> t;
        for (std::size_t i = 0; i < arr.size(); ++i) t.push_back(read_double(arr[i], at(at(path, "times"), i)));
        return t;
    }
    const double start = v.contains("start") ? read_double(v["start"], at(path, "start")) : 0.0;
    const double stop = read_double(require(v, path, "stop"), at(path, "stop"));
    const std::uint64_t count = read_uint(require(v, path, "count"), at(path, "count"));
    if (count == 0) throw ScenarioError(at(path, "count"), "count must be positive");
    try {
        return TimeGrid::linspace(start, stop, count).times;
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(path, e.what());
    }
}

ObservableSpec read_observable(const json& v, const std::string& path) {
    check_keys(v, path, {"id", "type", "sites", "pair", "terms"});
    ObservableSpec o;
    o.id = read_string(require(v, path, "id"), at(path, "id"));
    o.kind = read_enum(require(v, path, "type"), at(path, "type"), kObservables);
    if (o.kind == ObservableKind::Expectation) {
        if (v.contains("sites") || v.contains("pair")) throw ScenarioError(path, "expectation takes only terms");
        const json& terms = read_array(require(v, path, "terms"), at(path, "terms"));
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string p = at(at(path, "terms"), k);
            check_keys(terms[k], p, {"weight", "factors"});
            const Complex w = terms[k].contains("weight") ? read_complex(terms[k]["weight"], at(p, "weight")) : 1.0;
            std::vector<Factor> factors;
            const json& fs = read_array(require(terms[k], p, "factors"), at(p, "factors"));
            for (std::size_t f = 0; f < fs.size(); ++f) {
                const std::string fp = at(at(p, "factors"), f);
                check_keys(fs[f], fp, {"site", "op"});
                factors.push_back({read_uint(require(fs[f], fp, "site"), at(fp, "site")),
                                   read_enum(require(fs[f], fp, "op"), at(fp, "op"), kOps)});
            }
            o.op.add(w, std::move(factors));
        }
        return o;
    }
    if (v.contains("terms")) throw ScenarioError(at(path, "terms"), "only expectation observables take terms");
    o.sites = read_sites(require(v, path, "sites"), at(path, "sites"));
    const json& pair = read_array(require(v, path, "pair"), at(path, "pair"));
    if (pair.size() != 2) throw ScenarioError(at(path, "pair"), "expected [ket_a, ket_b]");
    o.ket_a = read_ket(pair[0], at(at(path, "pair"), 0));
    o.ket_b = read_ket(pair[1], at(at(path, "pair"), 1));
    return o;
}

PhaseKickSpec read_phase_kick(const json& v, const std::string& path) {
    check_keys(v, path, {"distribution", "width", "kicks_per_unit_time", "samples"});
    PhaseKickSpec k;
    if (v.contains("distribution")) k.distribution = read_enum(v["distribution"], at(path, "distribution"), kKicks);
    k.width = read_double(require(v, path, "width"), at(path, "width"));
    if (v.contains("kicks_per_unit_time"))
        k.kicks_per_unit_time = read_double(v["kicks_per_unit_time"], at(path, "kicks_per_unit_time"));
    if (v.contains("samples")) k.samples = read_uint(v["samples"], at(path, "samples"));
    return k;
}

// --------------------------- cross-field validation --------------------------

void check_site(const NetworkSpec& spec, std::size_t site, const std::string& path, std::optional<ModeKind> kind) {
    if (site >= spec.size())
        throw ScenarioError(path, "site " + std::to_string(site) + " is outside the " + std::to_string(spec.size()) +
                                      "-site network");
    if (kind && spec.mode(site).kind != *kind)
        throw ScenarioError(path, std::string("site ") + std::to_string(site) + " is not a " +
                                      (*kind == ModeKind::Boson ? "boson" : "fermion") + " mode");
}

void check_distinct(const std::vector<std::size_t>& sites, const std::string& path) {
    if (std::set<std::size_t>(sites.begin(), sites.end()).size() != sites.size())
        throw ScenarioError(path, "sites must be distinct");
}

void check_ket(const NetworkSpec& spec, const std::vector<std::size_t>& sites, const Occupations& ket,
               const std::string& path) {
    if (ket.size() != sites.size()) throw ScenarioError(path, "ket length must match the site list");
    for (std::size_t k = 0; k < ket.size(); ++k)
        if (ket[k] < 0 || ket[k] > spec.mode(sites[k]).cutoff)
            throw ScenarioError(at(path, k), "occupation outside 0.." + std::to_string(spec.mode(sites[k]).cutoff));
}

std::vector<std::size_t> named_state_sites(const InitialState& init) {
    return init.kind == InitialKind::Vacuum || init.kind == InitialKind::Amplitudes ? std::vector<std::size_t>{}
                                                                                      : init.sites;
}

}  // namespace

void validate_scenario(const Scenario& s) {
    if (s.schema != kScenarioSchemaVersion)
        throw ScenarioError("schema", "unsupported schema version " + std::to_string(s.schema));
    if (s.name.empty()) throw ScenarioError("name", "must be non-empty");
    if (s.network.empty()) throw ScenarioError("network", "network needs at least one mode");
    const NetworkSpec spec = s.spec();

    if (s.couplings.boson) {
        const auto& b = *s.couplings.boson;
        for (std::size_t k = 0; k < b.sites.size(); ++k)
            check_site(spec, b.sites[k], "couplings.boson.sites[" + std::to_string(k) + "]", ModeKind::Boson);
        check_distinct(b.sites, "couplings.boson.sites");
        if (b.matrix.size() != b.sites.size()) throw ScenarioError("couplings.boson.matrix", "size must match sites");
    }
    if (s.couplings.fermion) {
        const auto& f = *s.couplings.fermion;
        for (std::size_t k = 0; k < f.sites.size(); ++k)
            check_site(spec, f.sites[k], "couplings.fermion.sites[" + std::to_string(k) + "]", ModeKind::Fermion);
        check_distinct(f.sites, "couplings.fermion.sites");
        if (f.matrix.size() != f.sites.size()) throw ScenarioError("couplings.fermion.matrix", "size must match sites");
        if (f.form == FermionForm::Ladder && !f.axes.empty())
            throw ScenarioError("couplings.fermion.axes", "axes apply to the spin form only");
        for (std::size_t k = 0; k < f.axes.size(); ++k)
            if (f.axes[k].i >= f.sites.size() || f.axes[k].j >= f.sites.size())
                throw ScenarioError("couplings.fermion.axes[" + std::to_string(k) + "]",
                                    "link indices refer to positions in couplings.fermion.sites");
    }
    for (std::size_t k = 0; k < s.couplings.mixed.size(); ++k) {
        const std::string p = "couplings.mixed[" + std::to_string(k) + "]";
        check_site(spec, s.couplings.mixed[k].boson_site, p + ".boson", ModeKind::Boson);
        check_site(spec, s.couplings.mixed[k].fermion_site, p + ".fermion", ModeKind::Fermion);
    }
    for (std::size_t k = 0; k < s.couplings.dephasing.size(); ++k) {
        const std::string p = "couplings.dephasing[" + std::to_string(k) + "]";
        check_site(spec, s.couplings.dephasing[k].system_site, p + ".system", ModeKind::Fermion);
        check_site(spec, s.couplings.dephasing[k].env_site, p + ".env", ModeKind::Fermion);
        if (s.couplings.dephasing[k].system_site == s.couplings.dephasing[k].env_site)
            throw ScenarioError(p, "system and environment sites must differ");
    }
    try {
        (void)scenario_hamiltonian(s);
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("couplings", e.what());
    }

    const InitialState& init = s.initial;
    switch (init.kind) {
        case InitialKind::Vacuum:
        case InitialKind::Amplitudes:
            if (!init.sites.empty()) throw ScenarioError("initial_state.sites", "not used by this state type");
            break;
        case InitialKind::Singlet:
        case InitialKind::Triplet:
            if (init.sites.size() != 2) throw ScenarioError("initial_state.sites", "expected two fermion sites");
            for (std::size_t k = 0; k < 2; ++k)
                check_site(spec, init.sites[k], "initial_state.sites[" + std::to_string(k) + "]", ModeKind::Fermion);
            check_distinct(init.sites, "initial_state.sites");
            break;
        case InitialKind::SusyQubit:
            if (init.sites.size() != 2) throw ScenarioError("initial_state.sites", "expected [boson, fermion]");
            check_site(spec, init.sites[0], "initial_state.sites[0]", ModeKind::Boson);
            check_site(spec, init.sites[1], "initial_state.sites[1]", ModeKind::Fermion);
            break;
    }
    if (init.kind != InitialKind::Amplitudes && !init.amplitudes.empty())
        throw ScenarioError("initial_state.amplitudes", "only the amplitudes state type takes amplitudes");
    if (init.kind == InitialKind::Amplitudes) {
        if (init.amplitudes.empty()) throw ScenarioError("initial_state.amplitudes", "must be non-empty");
        if (!init.product.empty()) throw ScenarioError("initial_state.product", "not used with explicit amplitudes");
        std::vector<std::size_t> all(spec.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        double norm2 = 0.0;
        std::set<Occupations> seen;
        for (std::size_t k = 0; k < init.amplitudes.size(); ++k) {
            const std::string p = "initial_state.amplitudes[" + std::to_string(k) + "].ket";
            check_ket(spec, all, init.amplitudes[k].ket, p);
            if (!seen.insert(init.amplitudes[k].ket).second) throw ScenarioError(p, "duplicate ket");
            norm2 += std::norm(init.amplitudes[k].amplitude);
        }
        if (std::abs(norm2 - 1.0) > 1e-9) throw ScenarioError("initial_state.amplitudes", "state must be normalized");
    }
    std::vector<std::size_t> used = named_state_sites(init);
    for (std::size_t k = 0; k < init.product.size(); ++k) {
        const std::string p = "initial_state.product[" + std::to_string(k) + "]";
        check_site(spec, init.product[k].site, p + ".site", ModeKind::Fermion);
        if (std::ranges::find(used, init.product[k].site) != used.end())
            throw ScenarioError(p + ".site", "site is already set by the initial state");
        used.push_back(init.product[k].site);
        if (std::abs(std::norm(init.product[k].a0) + std::norm(init.product[k].a1) - 1.0) > 1e-9)
            throw ScenarioError(p + ".amplitudes", "factor must be normalized");
    }

    if (s.times.empty()) throw ScenarioError("grid", "needs at least one time");
    try {
        (void)TimeGrid(s.times);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError("grid.times", e.what());
    }

    std::set<std::string> ids;
    for (std::size_t k = 0; k < s.observables.size(); ++k) {
        const auto& o = s.observables[k];
        const std::string p = "observables[" + std::to_string(k) + "]";
        if (o.id.empty()) throw ScenarioError(p + ".id", "must be non-empty");
        if (!ids.insert(o.id).second) throw ScenarioError(p + ".id", "duplicate observable id \"" + o.id + "\"");
        if (o.kind == ObservableKind::Expectation) {
            try {
                validate(spec, o.op);
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(p + ".terms", e.what());
            }
            continue;
        }
        if (o.sites.empty()) throw ScenarioError(p + ".sites", "must be non-empty");
        for (std::size_t i = 0; i < o.sites.size(); ++i) {
            check_site(spec, o.sites[i], p + ".sites[" + std::to_string(i) + "]", std::nullopt);
            if (i > 0 && o.sites[i] <= o.sites[i - 1]) throw ScenarioError(p + ".sites", "must be strictly ascending");
        }
        check_ket(spec, o.sites, o.ket_a, p + ".pair[0]");
        check_ket(spec, o.sites, o.ket_b, p + ".pair[1]");
        if (o.ket_a == o.ket_b) throw ScenarioError(p + ".pair", "kets must differ");
    }

    switch (s.engine) {
        case EngineKind::Dense:
            if (spec.total_dim() > dense_guard())
                throw ScenarioError("engine", "dense engine: dimension " + std::to_string(spec.total_dim()) +
                                                  " exceeds the guard " + std::to_string(dense_guard()));
            break;
        case EngineKind::Quasi:
            if (!s.couplings.mixed.empty() || !s.couplings.dephasing.empty())
                throw ScenarioError("couplings", "the quasi engine handles boson and ladder-form fermion blocks only");
            if (s.couplings.fermion && s.couplings.fermion->form == FermionForm::Spin)
                throw ScenarioError("couplings.fermion.form", "the quasi engine needs the ladder form");
            break;
        case EngineKind::PhaseKick:
            if (spec.size() != 1 || !spec.mode(0).is_fermion())
                throw ScenarioError("network", "the phase-kick engine runs on a single two-level mode");
            if (s.couplings.boson || s.couplings.fermion || !s.couplings.mixed.empty() || !s.couplings.dephasing.empty())
                throw ScenarioError("couplings", "the phase-kick engine takes no couplings");
            for (std::size_t k = 0; k < s.observables.size(); ++k)
                if (s.observables[k].kind != ObservableKind::Coherence)
                    throw ScenarioError("observables[" + std::to_string(k) + "].type",
                                        "the phase-kick engine reports coherence only");
            break;
    }
    if (s.engine == EngineKind::PhaseKick) {
        if (!s.phase_kick) throw ScenarioError("phase_kick", "required by the phase-kick engine");
        if (!(s.phase_kick->width > 0.0)) throw ScenarioError("phase_kick.width", "must be positive");
        if (!(s.phase_kick->kicks_per_unit_time > 0.0))
            throw ScenarioError("phase_kick.kicks_per_unit_time", "must be positive");
        if (s.phase_kick->samples == 0) throw ScenarioError("phase_kick.samples", "must be positive");
    } else if (s.phase_kick) {
        throw ScenarioError("phase_kick", "only used by the phase-kick engine");
    }
}

Scenario scenario_from_json(const json& doc) {
    check_keys(doc, "", {"schema", "name", "network", "fermion_representation", "couplings", "initial_state",
                         "engine", "grid", "observables", "seed", "phase_kick", "allow_multi_excitation"});
    Scenario s;
    s.schema = read_int(require(doc, "", "schema"), "schema");
    if (s.schema != kScenarioSchemaVersion)
        throw ScenarioError("schema", "unsupported schema version " + std::to_string(s.schema));
    s.name = read_string(require(doc, "", "name"), "name");
    s.network = read_network(require(doc, "", "network"), "network");
    if (doc.contains("fermion_representation"))
        s.representation = read_enum(doc["fermion_representation"], "fermion_representation", kReps);
    if (doc.contains("couplings")) s.couplings = read_couplings(doc["couplings"], "couplings");
    if (doc.contains("initial_state")) s.initial = read_initial(doc["initial_state"], "initial_state");
    if (doc.contains("engine")) s.engine = read_enum(doc["engine"], "engine", kEngines);
    s.times = read_grid(require(doc, "", "grid"), "grid");
    if (doc.contains("observables")) {
        const json& arr = read_array(doc["observables"], "observables");
        for (std::size_t k = 0; k < arr.size(); ++k) s.observables.push_back(read_observable(arr[k], at("observables", k)));
    }
    if (doc.contains("seed")) s.seed = read_uint(doc["seed"], "seed");
    if (doc.contains("phase_kick")) s.phase_kick = read_phase_kick(doc["phase_kick"], "phase_kick");
    if (doc.contains("allow_multi_excitation")) {
        if (!doc["allow_multi_excitation"].is_boolean())
            throw ScenarioError("allow_multi_excitation", "expected a boolean");
        s.allow_multi_excitation = doc["allow_multi_excitation"].get<bool>();
    }
    validate_scenario(s);
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["schema"] = s.schema;
    doc["name"] = s.name;
    json net = json::array();
    for (const auto& m : s.network) {
        json mode{{"kind", enum_name(m.kind, kModeKinds)}};
        if (m.is_boson()) mode["cutoff"] = m.cutoff;
        net.push_back(std::move(mode));
    }
    doc["network"] = std::move(net);
    doc["fermion_representation"] = enum_name(s.representation, kReps);

    json c = json::object();
    if (s.couplings.boson) c["boson"] = {{"sites", s.couplings.boson->sites}, {"matrix", write_matrix(s.couplings.boson->matrix)}};
    if (s.couplings.fermion) {
        const auto& f = *s.couplings.fermion;
        json fj{{"sites", f.sites}, {"matrix", write_matrix(f.matrix)}, {"form", enum_name(f.form, kForms)}};
        if (!f.axes.empty()) {
            json axes = json::array();
            for (const auto& a : f.axes) axes.push_back({{"i", a.i}, {"j", a.j}, {"axis", enum_name(a.axis, kAxes)}});
            fj["axes"] = std::move(axes);
        }
        c["fermion"] = std::move(fj);
    }
    if (!s.couplings.mixed.empty()) {
        json arr = json::array();
        for (const auto& m : s.couplings.mixed)
            arr.push_back({{"boson", m.boson_site}, {"fermion", m.fermion_site}, {"weight", write_complex(m.weight)}});
        c["mixed"] = std::move(arr);
    }
    if (!s.couplings.dephasing.empty()) {
        json arr = json::array();
        for (const auto& d : s.couplings.dephasing)
            arr.push_back({{"system", d.system_site}, {"env", d.env_site}, {"weight", d.weight},
                           {"axis", enum_name(d.axis, kAxes)}});
        c["dephasing"] = std::move(arr);
    }
    doc["couplings"] = std::move(c);

    json init{{"type", enum_name(s.initial.kind, kInitial)}};
    if (!s.initial.sites.empty()) init["sites"] = s.initial.sites;
    if (s.initial.kind == InitialKind::SusyQubit) init["sign"] = enum_name(s.initial.sign, kSigns);
    if (!s.initial.amplitudes.empty()) {
        json arr = json::array();
        for (const auto& a : s.initial.amplitudes) arr.push_back({{"ket", a.ket}, {"amplitude", write_complex(a.amplitude)}});
        init["amplitudes"] = std::move(arr);
    }
    if (!s.initial.product.empty()) {
        json arr = json::array();
        for (const auto& p : s.initial.product)
            arr.push_back({{"site", p.site}, {"amplitudes", json::array({write_complex(p.a0), write_complex(p.a1)})}});
        init["product"] = std::move(arr);
    }
    doc["initial_state"] = std::move(init);
    doc["engine"] = enum_name(s.engine, kEngines);
    doc["grid"] = {{"times", s.times}};

    json obs = json::array();
    for (const auto& o : s.observables) {
        json oj{{"id", o.id}, {"type", enum_name(o.kind, kObservables)}};
        if (o.kind == ObservableKind::Expectation) {
            json terms = json::array();
            for (const auto& t : o.op.terms()) {
                json factors = json::array();
                for (const auto& f : t.factors) factors.push_back({{"site", f.site}, {"op", enum_name(f.op, kOps)}});
                terms.push_back({{"weight", write_complex(t.weight)}, {"factors", std::move(factors)}});
            }
            oj["terms"] = std::move(terms);
        } else {
            oj["sites"] = o.sites;
            oj["pair"] = json::array({o.ket_a, o.ket_b});
        }
        obs.push_back(std::move(oj));
    }
    doc["observables"] = std::move(obs);
    doc["seed"] = s.seed;
    if (s.allow_multi_excitation) doc["allow_multi_excitation"] = true;
    if (s.phase_kick) {
        doc["phase_kick"] = {{"distribution", enum_name(s.phase_kick->distribution, kKicks)},
                             {"width", s.phase_kick->width},
                             {"kicks_per_unit_time", s.phase_kick->kicks_per_unit_time},
                             {"samples", s.phase_kick->samples}};
    }
    return doc;
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("", std::string("parse error: ") + e.what());
    }
    return scenario_from_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("", "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

HamiltonianSum scenario_hamiltonian(const Scenario& s) {
    const NetworkSpec spec = s.spec();
    HamiltonianSum h;
    if (s.couplings.boson) h.append(build_boson_network(spec, s.couplings.boson->matrix, s.couplings.boson->sites));
    if (s.couplings.fermion) {
        const auto& f = *s.couplings.fermion;
        if (f.form == FermionForm::Ladder) {
            h.append(build_fermion_network_ladder(spec, f.matrix, f.sites));
        } else {
            LinkAxes axes;
            for (const auto& a : f.axes) {
                axes[{a.i, a.j}] = a.axis;
                axes[{a.j, a.i}] = a.axis;
            }
            h.append(build_fermion_network_spin(spec, f.matrix, f.sites, axes));
        }
    }
    if (!s.couplings.mixed.empty()) h.append(build_mixed_interaction(spec, s.couplings.mixed));
    if (!s.couplings.dephasing.empty()) h.append(build_dephasing_interaction(spec, s.couplings.dephasing));
    return h;
}

StateVector scenario_initial_state(const Scenario& s) {
    const NetworkSpec spec = s.spec();
    const InitialState& init = s.initial;
    StateVector base = StateVector::zero(spec);
    switch (init.kind) {
        case InitialKind::Vacuum:
            base = StateVector::vacuum(spec);
            break;
        case InitialKind::Singlet:
        case InitialKind::Triplet: {
            Occupations a = spec.vacuum(), b = spec.vacuum();
            a[init.sites[1]] = 1;  // |0_i 1_j>
            b[init.sites[0]] = 1;  // |1_i 0_j>
            const double sign = init.kind == InitialKind::Singlet ? -1.0 : 1.0;
            base = (StateVector::basis(spec, a) + StateVector::basis(spec, b) * Complex{sign}) *
                   Complex{1.0 / std::numbers::sqrt2};
            break;
        }
        case InitialKind::SusyQubit:
            base = build_dfs_state({init.sign, init.sites[0], init.sites[1]}, spec, s.representation);
            break;
        case InitialKind::Amplitudes: {
            CVector amps = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
            for (const auto& a : init.amplitudes) amps(static_cast<Eigen::Index>(spec.rank(a.ket))) = a.amplitude;
            return StateVector(spec, std::move(amps));
        }
    }
    if (init.product.empty()) return base;
    // Tensor in the single-site factors; the base state leaves those sites empty.
    CVector out = CVector::Zero(static_cast<Eigen::Index>(spec.total_dim()));
    for (std::size_t r = 0; r < spec.total_dim(); ++r) {
        const Complex a = base.amplitudes()(static_cast<Eigen::Index>(r));
        if (a == Complex{0.0}) continue;
        std::vector<Occupations> kets{spec.ket(r)};
        std::vector<Complex> weights{a};
        for (const auto& f : init.product) {
            std::vector<Occupations> next_kets;
            std::vector<Complex> next_weights;
            for (std::size_t k = 0; k < kets.size(); ++k) {
                for (int n = 0; n <= 1; ++n) {
                    Occupations occ = kets[k];
                    occ[f.site] = n;
                    next_kets.push_back(occ);
                    next_weights.push_back(weights[k] * (n == 0 ? f.a0 : f.a1));
                }
            }
            kets = std::move(next_kets);
            weights = std::move(next_weights);
        }
        for (std::size_t k = 0; k < kets.size(); ++k) out(static_cast<Eigen::Index>(spec.rank(kets[k]))) += weights[k];
    }
    return StateVector(spec, std::move(out));
}

std::string to_string(EngineKind e) { return enum_name(e, kEngines); }

}  // namespace sdfs

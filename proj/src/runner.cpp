// runner.cpp

#include "sdfs/runner.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <cmath>
#include <ostream>
#include <sstream>

#ifndef SDFS_VERSION
#define SDFS_VERSION "unknown"
#endif

namespace sdfs {

using nlohmann::json;

std::string library_version() { return SDFS_VERSION; }

std::string config_hash(const Scenario& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : emit_scenario(s)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace {

Observable to_observable(const ObservableSpec& o) {
    switch (o.kind) {
        case ObservableKind::Coherence:
            return CoherenceObservable{o.sites, {o.ket_a, o.ket_b}};
        case ObservableKind::RelativePhase:
            return PhaseObservable{o.sites, {o.ket_a, o.ket_b}};
        case ObservableKind::Expectation:
            break;
    }
    return o.op;
}

ModeTransform scenario_transform(const Scenario& s) {
    std::vector<QuasiBasis> blocks;
    if (s.couplings.boson) blocks.push_back(diagonalize_coupling(s.couplings.boson->matrix, s.couplings.boson->sites));
    if (s.couplings.fermion)
        blocks.push_back(diagonalize_coupling(s.couplings.fermion->matrix, s.couplings.fermion->sites));
    return ModeTransform(std::move(blocks));
}

void run_phase_kick(const Scenario& s, RunResult& out) {
    const StateVector psi = scenario_initial_state(s);
    const Complex alpha = psi.amplitude({0}), beta = psi.amplitude({1});
    const PhaseKickModel model{s.phase_kick->distribution, s.phase_kick->width, s.phase_kick->kicks_per_unit_time,
                               s.seed};
    const EnsembleResult ens = phase_kick_ensemble(alpha, beta, model, TimeGrid(s.times), s.phase_kick->samples);
    for (const auto& o : s.observables) {
        for (std::size_t i = 0; i < ens.times.size(); ++i) {
            out.records.push_back({s.name, "phase_kick", ens.times[i], o.id, ens.coherence[i], 0.0, s.seed, ""});
            out.records.push_back({s.name, "phase_kick", ens.times[i], o.id + ":expected", ens.expected[i], 0.0, s.seed, ""});
            out.records.push_back({s.name, "phase_kick", ens.times[i], o.id + ":stderr", ens.standard_error[i], 0.0, s.seed, ""});
        }
    }
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
    validate_scenario(s);
    RunResult out;
    out.config_hash = config_hash(s);

    if (s.engine == EngineKind::PhaseKick) {
        run_phase_kick(s, out);
    } else {
        const StateVector initial = scenario_initial_state(s);
        std::unique_ptr<Evolver> engine;
        if (s.engine == EngineKind::Dense) {
            engine = std::make_unique<DenseEvolver>(initial, scenario_hamiltonian(s), s.representation);
        } else {
            TransformOptions opts;
            opts.rep = s.representation;
            opts.allow_multi_excitation = s.allow_multi_excitation;
            auto quasi = std::make_unique<QuasiEvolver>(initial, scenario_transform(s), opts);
            out.quasi_cutoff = quasi->quasi_cutoff();
            engine = std::move(quasi);
        }
        std::vector<Observable> observables;
        for (const auto& o : s.observables) observables.push_back(to_observable(o));

        for (double t : s.times) {
            const Snapshot snap = engine->at(t);
            out.max_leakage = std::max(out.max_leakage, snap.leakage);
            for (std::size_t k = 0; k < observables.size(); ++k) {
                double value;
                try {
                    value = evaluate(observables[k], snap.state, s.representation);
                } catch (const std::domain_error&) {
                    // relative phase of a vanished component
                    value = std::numeric_limits<double>::quiet_NaN();
                }
                out.records.push_back({s.name, engine->tag(), t, s.observables[k].id, value, snap.leakage, s.seed, ""});
            }
        }
    }
    for (auto& r : out.records) {
        r.version = library_version();
        out.max_leakage = std::max(out.max_leakage, r.leakage);
    }
    out.tainted = out.max_leakage > kLeakageTol;
    std::stable_sort(out.records.begin(), out.records.end(), [](const ResultRecord& a, const ResultRecord& b) {
        if (a.scenario != b.scenario) return a.scenario < b.scenario;
        if (a.time != b.time) return a.time < b.time;
        return a.observable < b.observable;
    });
    return out;
}

namespace {

std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// RFC 4180 quoting for free-text fields.
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << field(r.scenario) << ',' << r.engine << ',' << real(r.time) << ',' << field(r.observable) << ','
            << real(r.value) << ',' << real(r.leakage) << ',' << r.seed << ',' << field(r.version) << '\n';
    }
}

std::string format_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream os;
    write_csv(os, records);
    return os.str();
}

json sidecar_json(const Scenario& s, const RunResult& r) {
    json doc{{"sidecar_schema", 1},
             {"scenario", s.name},
             {"engine", to_string(s.engine)},
             {"fermion_representation", to_string(s.representation)},
             {"version", library_version()},
             {"config_hash", r.config_hash},
             {"seed", s.seed},
             {"rows", r.records.size()},
             {"csv_header", kCsvHeader},
             {"tainted", r.tainted},
             {"max_leakage", r.max_leakage},
             {"leakage_tolerance", kLeakageTol}};
    doc["quasi_cutoff"] = r.quasi_cutoff ? json(*r.quasi_cutoff) : json(nullptr);
    return doc;
}

json records_json(const std::vector<ResultRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        // NaN has no JSON spelling
        const json value = std::isnan(r.value) ? json(nullptr) : json(r.value);
        arr.push_back({{"scenario", r.scenario},
                       {"engine", r.engine},
                       {"time", r.time},
                       {"observable", r.observable},
                       {"value", value},
                       {"leakage", r.leakage},
                       {"seed", r.seed},
                       {"version", r.version}});
    }
    return arr;
}

std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunResult& r,
                                                 const std::filesystem::path& dir, OutputFormat format) {
    std::filesystem::create_directories(dir);
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << text;
    };
    if (format == OutputFormat::Csv) {
        const auto csv = dir / (s.name + ".csv");
        const auto meta = dir / (s.name + ".meta.json");
        write(csv, format_csv(r.records));
        write(meta, sidecar_json(s, r).dump(2) + "\n");
        return {csv, meta};
    }
    json doc = sidecar_json(s, r);
    doc["records"] = records_json(r.records);
    const auto path = dir / (s.name + ".json");
    write(path, doc.dump(2) + "\n");
    return {path};
}

json diagonalize_json(const Scenario& s) {
    json sectors = json::array();
    auto dump = [&](const char* name, const CouplingMatrix& m, const std::vector<std::size_t>& sites) {
        const QuasiBasis qb = diagonalize_coupling(m, sites);
        json u = json::array();
        for (Eigen::Index r = 0; r < qb.u.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < qb.u.cols(); ++c) row.push_back({qb.u(r, c).real(), qb.u(r, c).imag()});
            u.push_back(std::move(row));
        }
        std::vector<double> omega(qb.omega.data(), qb.omega.data() + qb.omega.size());
        sectors.push_back({{"sector", name},
                           {"sites", sites},
                           {"omega", omega},
                           {"u", std::move(u)},
                           {"unitarity_defect", unitarity_defect(qb)},
                           {"diagonalization_residual", diagonalization_residual(qb, m)}});
    };
    if (s.couplings.boson) dump("boson", s.couplings.boson->matrix, s.couplings.boson->sites);
    if (s.couplings.fermion) dump("fermion", s.couplings.fermion->matrix, s.couplings.fermion->sites);
    return {{"scenario", s.name}, {"version", library_version()}, {"sectors", std::move(sectors)}};
}

}  // namespace sdfs

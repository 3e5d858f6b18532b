// hamiltonians.cpp

#include "sdfs/hamiltonians.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace sdfs {

namespace {

constexpr double kHermitianTol = 1e-12;

SiteMap resolve_sites(const NetworkSpec& spec, std::size_t n, SiteMap sites, ModeKind kind, const char* who) {
    if (sites.empty()) {
        sites.resize(n);
        for (std::size_t i = 0; i < n; ++i) sites[i] = i;
    }
    if (sites.size() != n) throw std::invalid_argument(std::string(who) + ": site map size does not match coupling");
    for (std::size_t s : sites) {
        if (s >= spec.size()) throw std::invalid_argument(std::string(who) + ": site " + std::to_string(s) + " out of range");
        if (spec.mode(s).kind != kind)
            throw std::invalid_argument(std::string(who) + ": site " + std::to_string(s) + " has the wrong mode kind");
    }
    return sites;
}

HamiltonianSum hopping_network(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites,
                               NetworkOptions opts, ModeKind kind, const char* who) {
    sites = resolve_sites(spec, coupling.size(), std::move(sites), kind, who);
    const double offset_sign = kind == ModeKind::Boson ? 1.0 : -1.0;
    HamiltonianSum h;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        h.add(coupling(i, i), {create(sites[i]), annihilate(sites[i])});
        if (opts.include_ground_offset) h.add(offset_sign * coupling(i, i), {});
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            h.add(coupling(i, j), {create(sites[i]), annihilate(sites[j])});
            h.add(std::conj(coupling(i, j)), {create(sites[j]), annihilate(sites[i])});
        }
    }
    return h;
}

}  // namespace

CouplingMatrix::CouplingMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw std::invalid_argument("CouplingMatrix: matrix must be square");
    if (entries_.rows() == 0) throw std::invalid_argument("CouplingMatrix: empty matrix");
    if (hermiticity_defect(entries_) > kHermitianTol)
        throw std::invalid_argument("CouplingMatrix: matrix is not Hermitian");
}

CouplingMatrix CouplingMatrix::zero(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return CouplingMatrix(CMatrix::Zero(k, k));
}

HamiltonianSum build_boson_network(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites,
                                   NetworkOptions opts) {
    return hopping_network(spec, coupling, std::move(sites), opts, ModeKind::Boson, "build_boson_network");
}

HamiltonianSum build_fermion_network_ladder(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites,
                                            NetworkOptions opts) {
    return hopping_network(spec, coupling, std::move(sites), opts, ModeKind::Fermion, "build_fermion_network_ladder");
}

HamiltonianSum build_fermion_network_spin(const NetworkSpec& spec, const CouplingMatrix& coupling, SiteMap sites,
                                          const LinkAxes& axes) {
    sites = resolve_sites(spec, coupling.size(), std::move(sites), ModeKind::Fermion, "build_fermion_network_spin");
    auto axis_of = [&](std::size_t i, std::size_t j) {
        if (auto it = axes.find({i, j}); it != axes.end()) return it->second;
        if (auto it = axes.find({j, i}); it != axes.end()) return it->second;
        return PauliAxis::Z;
    };
    HamiltonianSum h;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = 0; j < sites.size(); ++j) {
            const Complex w = coupling(i, j);
            if (i != j && std::abs(w.imag()) > kHermitianTol)
                throw std::invalid_argument("build_fermion_network_spin: coupling (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") is not real");
            const PauliAxis a = axis_of(i, j);
            h.add(0.25 * w.real(), {pauli(sites[i], a), pauli(sites[j], a)});
        }
    }
    return h;
}

HamiltonianSum build_dephasing_interaction(const NetworkSpec& spec, std::span<const DephasingLink> links) {
    std::set<std::size_t> system, env;
    for (const auto& l : links) {
        system.insert(l.system_site);
        env.insert(l.env_site);
    }
    for (std::size_t s : system) {
        if (env.count(s)) throw std::invalid_argument("build_dephasing_interaction: site " + std::to_string(s) +
                                                      " is both system and environment");
    }
    HamiltonianSum h;
    for (const auto& l : links) {
        for (std::size_t s : {l.system_site, l.env_site}) {
            if (s >= spec.size() || !spec.mode(s).is_fermion())
                throw std::invalid_argument("build_dephasing_interaction: site " + std::to_string(s) +
                                            " is not a fermionic mode");
        }
        h.add(0.25 * l.weight, {pauli(l.system_site, l.axis), pauli(l.env_site, l.axis)});
    }
    return h;
}

HamiltonianSum build_dephasing_interaction(const NetworkSpec& spec, std::span<const std::size_t> system_sites,
                                           std::span<const std::size_t> env_sites, const Eigen::MatrixXd& weights,
                                           std::span<const PauliAxis> env_axes) {
    if (weights.rows() != static_cast<Eigen::Index>(system_sites.size()) ||
        weights.cols() != static_cast<Eigen::Index>(env_sites.size()) || env_axes.size() != env_sites.size())
        throw std::invalid_argument("build_dephasing_interaction: weight/axis shape mismatch");
    for (std::size_t s : system_sites) {
        for (std::size_t e : env_sites) {
            if (s == e) throw std::invalid_argument("build_dephasing_interaction: overlapping site sets");
        }
    }
    std::vector<DephasingLink> links;
    for (std::size_t s = 0; s < system_sites.size(); ++s) {
        for (std::size_t e = 0; e < env_sites.size(); ++e) {
            const double w = weights(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(e));
            if (w == 0.0) continue;
            links.push_back({system_sites[s], env_sites[e], w, env_axes[e]});
        }
    }
    return build_dephasing_interaction(spec, links);
}

std::vector<DephasingLink> collective_links(std::span<const std::size_t> system_sites,
                                            std::span<const std::size_t> env_sites, std::span<const double> env_weights,
                                            std::span<const PauliAxis> env_axes) {
    if (env_weights.size() != env_sites.size() || env_axes.size() != env_sites.size())
        throw std::invalid_argument("collective_links: one weight and one axis per environment site");
    std::vector<DephasingLink> links;
    for (std::size_t e = 0; e < env_sites.size(); ++e)
        for (std::size_t s : system_sites) links.push_back({s, env_sites[e], env_weights[e], env_axes[e]});
    return links;
}

HamiltonianSum build_mixed_interaction(const NetworkSpec& spec, std::span<const MixedPair> pairs) {
    HamiltonianSum h;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        if (p.boson_site >= spec.size() || !spec.mode(p.boson_site).is_boson() || p.fermion_site >= spec.size() ||
            !spec.mode(p.fermion_site).is_fermion())
            throw std::invalid_argument("build_mixed_interaction: pair " + std::to_string(k) +
                                        " must link a boson site to a fermion site");
        h.add(p.weight, {create(p.boson_site), annihilate(p.fermion_site)});
        h.add(std::conj(p.weight), {annihilate(p.boson_site), create(p.fermion_site)});
    }
    return h;
}

HamiltonianSum build_free_oscillators(const NetworkSpec& spec, std::span<const std::size_t> sites,
                                      std::span<const double> omegas, NetworkOptions opts) {
    if (sites.size() != omegas.size()) throw std::invalid_argument("build_free_oscillators: one frequency per site");
    HamiltonianSum h;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        if (sites[k] >= spec.size()) throw std::invalid_argument("build_free_oscillators: site out of range");
        h.add(omegas[k], {create(sites[k]), annihilate(sites[k])});
        if (opts.include_ground_offset) h.add((spec.mode(sites[k]).is_boson() ? 1.0 : -1.0) * omegas[k], {});
    }
    return h;
}

HamiltonianSum sigma_product_ladder_expansion(std::size_t i, std::size_t j) {
    HamiltonianSum h;
    h.add(1.0, {create(i), annihilate(i), create(j), annihilate(j)});
    h.add(-0.5, {create(i), annihilate(i)});
    h.add(-0.5, {create(j), annihilate(j)});
    h.add(0.25, {});
    return h;
}

}  // namespace sdfs

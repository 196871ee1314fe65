#include "episurv/types.hpp"

#include <algorithm>
#include <cmath>

namespace episurv {

ContactNetwork::ContactNetwork(std::int64_t n,
                               std::vector<std::pair<std::int64_t, std::int64_t>> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw ConfigError("network: negative node count");
    for (auto& [u, v] : edges_) {
        if (u == v) throw DataError("network: self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw DataError("network: edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw DataError("network: duplicate edge");
    adjacency_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& [u, v] : edges_) {
        adjacency_[static_cast<std::size_t>(u)].push_back(v);
        adjacency_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

const std::vector<std::int64_t>& ContactNetwork::neighbors_of(std::int64_t v) const {
    if (v < 0 || v >= n_) throw DataError("network: node id out of range");
    return adjacency_[static_cast<std::size_t>(v)];
}

std::int64_t ContactNetwork::degree_of(std::int64_t v) const {
    return static_cast<std::int64_t>(neighbors_of(v).size());
}

double ContactNetwork::mean_degree() const {
    if (n_ == 0) return 0.0;
    return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
}

double ContactNetwork::size_biased_excess_degree() const {
    double sum_d = 0.0, sum_dd1 = 0.0;
    for (const auto& nbrs : adjacency_) {
        const auto d = static_cast<double>(nbrs.size());
        sum_d += d;
        sum_dd1 += d * (d - 1.0);
    }
    if (sum_d == 0.0) return 0.0;
    return sum_dd1 / sum_d;
}

const std::unordered_map<std::int64_t, std::size_t>& EpidemicDataset::index() const {
    if (index_.size() != individuals.size()) {
        index_.clear();
        index_.reserve(individuals.size());
        for (std::size_t i = 0; i < individuals.size(); ++i)
            index_.emplace(individuals[i].id, i);
    }
    return index_;
}

const IndividualRecord* EpidemicDataset::find(std::int64_t id) const {
    const auto& idx = index();
    const auto it = idx.find(id);
    return it == idx.end() ? nullptr : &individuals[it->second];
}

void EpidemicDataset::validate() const {
    if (population < infection_count())
        throw DataError("dataset: more infections than individuals in the population");
    if (index().size() != individuals.size())
        throw DataError("dataset: duplicate individual id");
    for (const auto& r : individuals) {
        if (!std::isfinite(r.t_infection) || !std::isfinite(r.t_infectious) ||
            !std::isfinite(r.t_recovery))
            throw DataError("dataset: non-finite event time for id " + std::to_string(r.id));
        if (r.t_infectious < r.t_infection)
            throw DataError("dataset: infectiousness precedes infection for id " +
                            std::to_string(r.id));
        if (!(r.t_recovery > r.t_infectious))
            throw DataError("dataset: nonpositive infectious period for id " +
                            std::to_string(r.id));
        if (r.t_infection > horizon)
            throw DataError("dataset: infection after the observation horizon for id " +
                            std::to_string(r.id));
        if (r.imported && r.infector)
            throw DataError("dataset: imported case with an infector, id " +
                            std::to_string(r.id));
        if (r.infector) {
            const IndividualRecord* v = find(*r.infector);
            if (!v)
                throw DataError("dataset: unknown infector for id " + std::to_string(r.id));
            // Exact ties with the infector's onset are tolerated here; the
            // likelihood floors them to a small positive gap.
            if (r.t_infection < v->t_infectious || r.t_infection > v->t_recovery)
                throw DataError("dataset: infector not infectious at infection of id " +
                                std::to_string(r.id));
        }
        if (network) {
            if (r.id < 0 || r.id >= network->n_nodes())
                throw DataError("dataset: individual id outside the network");
        }
    }
    if (network && network->n_nodes() != population)
        throw DataError("dataset: network size differs from population size");
}

}  // namespace episurv

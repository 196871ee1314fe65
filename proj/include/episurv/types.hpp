#ifndef EPISURV_TYPES_HPP
#define EPISURV_TYPES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace episurv {

// Malformed or internally inconsistent observed data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid simulation or estimation configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One observed infection: all three SEIR transition times plus whatever else
// the observer recorded (degree and neighbors for network data, the true
// infector when contact tracing is perfect).
struct IndividualRecord {
    std::int64_t id = 0;
    bool imported = false;
    double t_infection = 0.0;   // S -> E
    double t_infectious = 0.0;  // E -> I
    double t_recovery = 0.0;    // I -> R
    std::optional<std::int64_t> degree;
    std::vector<std::int64_t> neighbors;  // empty for mass-action data
    std::optional<std::int64_t> infector;

    double latent_period() const { return t_infectious - t_infection; }
    double infectious_period() const { return t_recovery - t_infectious; }

    friend bool operator==(const IndividualRecord&, const IndividualRecord&) = default;
};

// Undirected contact network without self-loops or multi-edges.
class ContactNetwork {
  public:
    ContactNetwork() = default;
    ContactNetwork(std::int64_t n, std::vector<std::pair<std::int64_t, std::int64_t>> edges);

    std::int64_t n_nodes() const { return n_; }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& edges() const { return edges_; }
    const std::vector<std::int64_t>& neighbors_of(std::int64_t v) const;
    std::int64_t degree_of(std::int64_t v) const;
    double mean_degree() const;

    // Empirical size-biased degree ratio sum d(d-1) / sum d, the expected
    // onward-degree of a node reached by following a random edge.
    double size_biased_excess_degree() const;

    friend bool operator==(const ContactNetwork& a, const ContactNetwork& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

  private:
    std::int64_t n_ = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> edges_;  // u < v, sorted
    std::vector<std::vector<std::int64_t>> adjacency_;
};

// A completely observed epidemic: every individual infected by the horizon,
// the horizon itself, the population size, and (for network models) the
// contact network. Susceptible individuals appear only through the network
// and the population count.
struct EpidemicDataset {
    std::vector<IndividualRecord> individuals;
    double horizon = 0.0;          // T
    std::int64_t population = 0;   // n
    std::optional<ContactNetwork> network;

    std::int64_t infection_count() const {
        return static_cast<std::int64_t>(individuals.size());
    }

    // id -> index lookup; built once on first use.
    const std::unordered_map<std::int64_t, std::size_t>& index() const;
    const IndividualRecord* find(std::int64_t id) const;

    // Structural consistency checks shared by the loaders and the simulator.
    void validate() const;

    friend bool operator==(const EpidemicDataset& a, const EpidemicDataset& b) {
        return a.individuals == b.individuals && a.horizon == b.horizon &&
               a.population == b.population && a.network == b.network;
    }

  private:
    mutable std::unordered_map<std::int64_t, std::size_t> index_;
};

}  // namespace episurv

#endif

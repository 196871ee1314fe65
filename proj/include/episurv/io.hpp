#ifndef EPISURV_IO_HPP
#define EPISURV_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "episurv/fit.hpp"
#include "episurv/r0.hpp"
#include "episurv/simulate.hpp"
#include "episurv/types.hpp"

namespace episurv {

using nlohmann::json;

// Decimal text with 17 significant digits: parses back to the identical bits.
std::string format_double(double v);

json hazard_to_json(const HazardModel& m);
HazardModel hazard_from_json(const json& j);

json duration_to_json(const DurationDist& d);
DurationDist duration_from_json(const json& j);

// Population network edges live in edges.csv, not in the config JSON.
json config_to_json(const SimulationConfig& cfg);
SimulationConfig config_from_json(const json& j, std::optional<ContactNetwork> network);

json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const json& j);

json r0_to_json(const R0Estimate& est);

// Dataset directory layout: individuals.csv, meta.json, and (network models)
// edges.csv. Missing values are written as empty fields.
void save_dataset(const EpidemicDataset& data, const std::filesystem::path& dir,
                  const json& config = json(), std::uint64_t seed = 0);
EpidemicDataset load_dataset(const std::filesystem::path& dir);

// Daily case counts plus the timing assumptions needed to expand them into
// individual-level data.
struct EpiCurve {
    std::vector<std::int64_t> counts;  // counts[d] = cases reported on day d
    double latent = 1.0;               // infection -> infectiousness
    double incubation = 2.0;           // infection -> symptom onset (reporting day)
    double infectious = 1.0;           // constant infectious period
};

// Parses "day,count" rows; days are shifted so the earliest becomes 0 and
// gaps are filled with zero counts. A non-numeric first line is treated as a
// header.
EpiCurve parse_epicurve_csv(std::istream& in);

// Expands daily counts into a mass-action dataset: a case reported on day d
// was infected at d - incubation, infectious from infection + latent, for the
// assumed constant infectious period. All earliest-day cases are imports and
// the horizon is the day after the last day of the curve minus the incubation
// lag (the point where the infection record stops being complete).
EpidemicDataset epicurve_to_dataset(const EpiCurve& curve, std::int64_t population);

}  // namespace episurv

#endif

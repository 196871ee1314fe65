#include "episurv/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace episurv {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double parse_double(const std::string& tok, const std::string& where) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw DataError(where + ": malformed number '" + tok + "'");
    return v;
}

std::int64_t parse_int(const std::string& tok, const std::string& where) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw DataError(where + ": malformed integer '" + tok + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string loc(const fs::path& file, std::size_t line_no) {
    return file.filename().string() + ":" + std::to_string(line_no);
}

}  // namespace

json hazard_to_json(const HazardModel& m) {
    return json{{"family", family_name(m.family)}, {"params", m.params}};
}

HazardModel hazard_from_json(const json& j) {
    if (!j.contains("family") || !j.contains("params"))
        throw DataError("hazard model JSON needs 'family' and 'params'");
    return HazardModel::from_params(family_from_name(j.at("family").get<std::string>()),
                                    j.at("params").get<std::vector<double>>());
}

json duration_to_json(const DurationDist& d) {
    return json{{"kind", d.kind == DurationDist::Kind::Constant ? "constant" : "exponential"},
                {"mean", d.mean}};
}

DurationDist duration_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    const double mean = j.at("mean").get<double>();
    if (kind == "constant") return DurationDist::constant(mean);
    if (kind == "exponential") return DurationDist::exponential(mean);
    throw DataError("unknown duration kind: " + kind);
}

json config_to_json(const SimulationConfig& cfg) {
    json pop;
    if (const auto* ma = std::get_if<MassActionPopulation>(&cfg.population)) {
        pop = json{{"model", "mass-action"}, {"n", ma->n}};
    } else if (const auto* np = std::get_if<NetworkPopulation>(&cfg.population)) {
        pop = json{{"model", "network"}, {"n", np->network.n_nodes()}};
    } else {
        const auto& er = std::get<ErdosRenyiPopulation>(cfg.population);
        pop = json{{"model", "erdos-renyi"},
                   {"n", er.n},
                   {"expected_degree", er.expected_degree}};
    }
    json j{{"population", pop},
           {"contact_model", hazard_to_json(cfg.contact_model)},
           {"infectious_period", duration_to_json(cfg.infectious_period)},
           {"latent_period", duration_to_json(cfg.latent_period)},
           {"m_target", cfg.m_target},
           {"max_restarts", cfg.max_restarts}};
    if (!cfg.imports.empty()) j["imports"] = cfg.imports;
    return j;
}

SimulationConfig config_from_json(const json& j, std::optional<ContactNetwork> network) {
    SimulationConfig cfg;
    const json& pop = j.at("population");
    const auto model = pop.at("model").get<std::string>();
    if (model == "mass-action") {
        cfg.population = MassActionPopulation{pop.at("n").get<std::int64_t>()};
    } else if (model == "network") {
        if (network) {
            cfg.population = NetworkPopulation{std::move(*network)};
        } else if (pop.contains("edges")) {
            std::vector<std::pair<std::int64_t, std::int64_t>> edges;
            for (const auto& e : pop.at("edges"))
                edges.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
            cfg.population =
                NetworkPopulation{ContactNetwork(pop.at("n").get<std::int64_t>(), edges)};
        } else {
            throw DataError("network population needs an edge list");
        }
    } else if (model == "erdos-renyi") {
        cfg.population = ErdosRenyiPopulation{pop.at("n").get<std::int64_t>(),
                                              pop.at("expected_degree").get<double>()};
    } else {
        throw DataError("unknown population model: " + model);
    }
    cfg.contact_model = hazard_from_json(j.at("contact_model"));
    cfg.infectious_period = duration_from_json(j.at("infectious_period"));
    if (j.contains("latent_period"))
        cfg.latent_period = duration_from_json(j.at("latent_period"));
    cfg.m_target = j.at("m_target").get<std::int64_t>();
    if (j.contains("max_restarts")) cfg.max_restarts = j.at("max_restarts").get<int>();
    if (j.contains("imports")) cfg.imports = j.at("imports").get<std::vector<std::int64_t>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

json fit_to_json(const FitResult& fit) {
    json cis = json::array();
    for (const auto& ci : fit.profile_cis)
        cis.push_back(json{{"lo", ci.lo},
                           {"hi", ci.hi},
                           {"lo_open", ci.lo_open},
                           {"hi_open", ci.hi_open}});
    std::vector<double> cov;
    const int p = fit.model.n_params();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) cov.push_back(fit.covariance_valid ? fit.covariance(i, j) : 0.0);
    return json{{"family", family_name(fit.model.family)},
                {"params", fit.model.params},
                {"loglik", fit.loglik},
                {"covariance", cov},
                {"covariance_valid", fit.covariance_valid},
                {"profile_cis", cis},
                {"converged", fit.converged},
                {"stationarity", fit.stationarity},
                {"n_events", fit.n_events},
                {"total_exposure", fit.total_exposure},
                {"likelihood", likelihood_kind_name(fit.kind)}};
}

FitResult fit_from_json(const json& j) {
    FitResult fit;
    fit.model = HazardModel::from_params(family_from_name(j.at("family").get<std::string>()),
                                         j.at("params").get<std::vector<double>>());
    fit.loglik = j.at("loglik").get<double>();
    fit.converged = j.at("converged").get<bool>();
    fit.covariance_valid = j.at("covariance_valid").get<bool>();
    const auto cov = j.at("covariance").get<std::vector<double>>();
    const int p = fit.model.n_params();
    if (cov.size() != static_cast<std::size_t>(p * p))
        throw DataError("fit JSON: covariance has the wrong size");
    fit.covariance = Mat(p);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) fit.covariance(i, k) = cov[static_cast<std::size_t>(i * p + k)];
    for (const auto& ci : j.at("profile_cis"))
        fit.profile_cis.push_back(ProfileCi{ci.at("lo").get<double>(), ci.at("hi").get<double>(),
                                            ci.at("lo_open").get<bool>(),
                                            ci.at("hi_open").get<bool>()});
    if (j.contains("stationarity")) fit.stationarity = j.at("stationarity").get<double>();
    if (j.contains("n_events")) fit.n_events = j.at("n_events").get<std::int64_t>();
    if (j.contains("total_exposure"))
        fit.total_exposure = j.at("total_exposure").get<double>();
    return fit;
}

json r0_to_json(const R0Estimate& est) {
    return json{{"point", est.point}, {"lo", est.lo},   {"hi", est.hi},
                {"B", est.n_bootstrap}, {"seed", est.seed},
                {"rejected_draws", est.rejected_draws}};
}

void save_dataset(const EpidemicDataset& data, const fs::path& dir, const json& config,
                  std::uint64_t seed) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "individuals.csv");
        if (!out) throw DataError("cannot write " + (dir / "individuals.csv").string());
        out << "id,imported,t_inf,t_onset_infectious,t_recovery,degree,infector\n";
        for (const auto& r : data.individuals) {
            out << r.id << ',' << (r.imported ? 1 : 0) << ',' << format_double(r.t_infection)
                << ',' << format_double(r.t_infectious) << ',' << format_double(r.t_recovery)
                << ',';
            if (r.degree) out << *r.degree;
            out << ',';
            if (r.infector) out << *r.infector;
            out << '\n';
        }
    }
    if (data.network) {
        std::ofstream out(dir / "edges.csv");
        if (!out) throw DataError("cannot write " + (dir / "edges.csv").string());
        out << "u,v\n";
        for (const auto& [u, v] : data.network->edges()) out << u << ',' << v << '\n';
    }
    {
        json meta{{"T", data.horizon},
                  {"n", data.population},
                  {"m", data.infection_count()},
                  {"seed", seed}};
        if (!config.is_null()) meta["config"] = config;
        std::ofstream out(dir / "meta.json");
        if (!out) throw DataError("cannot write " + (dir / "meta.json").string());
        out << meta.dump(2) << '\n';
    }
}

EpidemicDataset load_dataset(const fs::path& dir) {
    EpidemicDataset data;

    const fs::path meta_path = dir / "meta.json";
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw DataError("cannot read " + meta_path.string());
    json meta;
    try {
        meta_in >> meta;
    } catch (const json::exception& e) {
        throw DataError(meta_path.filename().string() + ": " + e.what());
    }
    data.horizon = meta.at("T").get<double>();
    data.population = meta.at("n").get<std::int64_t>();

    const fs::path edges_path = dir / "edges.csv";
    if (fs::exists(edges_path)) {
        std::ifstream in(edges_path);
        std::string line;
        std::size_t line_no = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> edges;
        while (std::getline(in, line)) {
            ++line_no;
            if (line_no == 1 || line.empty()) continue;  // header
            const auto tok = split_csv(line);
            if (tok.size() != 2)
                throw DataError(loc(edges_path, line_no) + ": expected 2 fields");
            edges.emplace_back(parse_int(tok[0], loc(edges_path, line_no)),
                               parse_int(tok[1], loc(edges_path, line_no)));
        }
        data.network = ContactNetwork(data.population, std::move(edges));
    }

    const fs::path ind_path = dir / "individuals.csv";
    std::ifstream in(ind_path);
    if (!in) throw DataError("cannot read " + ind_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;  // header
        const auto tok = split_csv(line);
        if (tok.size() != 7)
            throw DataError(loc(ind_path, line_no) + ": expected 7 fields, got " +
                            std::to_string(tok.size()));
        const std::string where = loc(ind_path, line_no);
        IndividualRecord r;
        r.id = parse_int(tok[0], where);
        const std::int64_t imported = parse_int(tok[1], where);
        if (imported != 0 && imported != 1)
            throw DataError(where + ": imported flag must be 0 or 1");
        r.imported = imported == 1;
        r.t_infection = parse_double(tok[2], where);
        r.t_infectious = parse_double(tok[3], where);
        r.t_recovery = parse_double(tok[4], where);
        if (!tok[5].empty()) r.degree = parse_int(tok[5], where);
        if (!tok[6].empty()) r.infector = parse_int(tok[6], where);
        if (data.network) r.neighbors = data.network->neighbors_of(r.id);
        data.individuals.push_back(std::move(r));
    }

    if (meta.contains("m") &&
        meta.at("m").get<std::int64_t>() != data.infection_count())
        throw DataError("meta.json: 'm' does not match individuals.csv");
    data.validate();
    return data;
}

EpiCurve parse_epicurve_csv(std::istream& in) {
    std::map<std::int64_t, std::int64_t> by_day;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto tok = split_csv(line);
        if (line_no == 1 && !tok.empty() &&
            tok[0].find_first_not_of("-0123456789") != std::string::npos)
            continue;  // header row
        if (tok.size() != 2)
            throw DataError("epicurve.csv:" + std::to_string(line_no) +
                            ": expected 2 fields (day,count)");
        const std::string where = "epicurve.csv:" + std::to_string(line_no);
        const std::int64_t day = parse_int(tok[0], where);
        const std::int64_t count = parse_int(tok[1], where);
        if (count < 0) throw DataError(where + ": negative count");
        by_day[day] += count;
    }
    if (by_day.empty()) throw DataError("epicurve.csv: no rows");
    EpiCurve curve;
    const std::int64_t d0 = by_day.begin()->first;
    const std::int64_t d1 = by_day.rbegin()->first;
    curve.counts.assign(static_cast<std::size_t>(d1 - d0 + 1), 0);
    for (const auto& [day, count] : by_day)
        curve.counts[static_cast<std::size_t>(day - d0)] = count;
    return curve;
}

EpidemicDataset epicurve_to_dataset(const EpiCurve& curve, std::int64_t population) {
    if (curve.counts.empty()) throw DataError("epicurve: empty series");
    if (!(curve.infectious > 0.0))
        throw ConfigError("epicurve: infectious period must be positive");
    if (curve.latent < 0.0 || curve.incubation < 0.0)
        throw ConfigError("epicurve: negative duration");

    std::int64_t total = 0;
    std::int64_t first_day = -1;
    for (std::size_t d = 0; d < curve.counts.size(); ++d) {
        if (curve.counts[d] < 0) throw DataError("epicurve: negative count");
        if (curve.counts[d] > 0 && first_day < 0) first_day = static_cast<std::int64_t>(d);
        total += curve.counts[d];
    }
    if (total == 0) throw DataError("epicurve: no cases");
    if (population < total)
        throw DataError("epicurve: population smaller than the case total");

    EpidemicDataset data;
    data.population = population;
    // Cases reported through day L correspond to infections through day
    // L - incubation, so the infection record is complete only up to there;
    // a later horizon would count exposure whose outcomes are unobservable.
    data.horizon = static_cast<double>(curve.counts.size()) - curve.incubation;
    std::int64_t id = 0;
    for (std::size_t d = 0; d < curve.counts.size(); ++d) {
        for (std::int64_t k = 0; k < curve.counts[d]; ++k) {
            IndividualRecord r;
            r.id = id++;
            r.imported = static_cast<std::int64_t>(d) == first_day;
            r.t_infection = static_cast<double>(d) - curve.incubation;
            r.t_infectious = r.t_infection + curve.latent;
            r.t_recovery = r.t_infectious + curve.infectious;
            data.individuals.push_back(std::move(r));
        }
    }
    data.validate();
    return data;
}

}  // namespace episurv

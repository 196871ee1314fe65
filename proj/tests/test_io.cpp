#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "episurv/io.hpp"
#include "episurv/likelihood.hpp"

using namespace episurv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("episurv-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

EpidemicDataset sample_network_dataset() {
    SimulationConfig cfg;
    Rng graph_rng(5);
    cfg.population = NetworkPopulation{generate_er_network(300, 6.0, graph_rng)};
    cfg.contact_model = HazardModel::weibull(1.5, 1.0);
    cfg.infectious_period = DurationDist::exponential(1.0);
    cfg.m_target = 40;
    cfg.max_restarts = 100;
    Rng rng(99);
    const auto result = run_with_restarts(cfg, rng);
    REQUIRE(std::holds_alternative<SimOutcome>(result));
    return std::get<SimOutcome>(result).dataset;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips bit-exactly") {
    Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform() * 20 - 10);
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("dataset save/load round trip is exact") {
    const EpidemicDataset data = sample_network_dataset();
    const fs::path dir = temp_dir("roundtrip");
    save_dataset(data, dir);
    const EpidemicDataset back = load_dataset(dir);
    CHECK(back == data);
    fs::remove_all(dir);
}

TEST_CASE("mass-action dataset round trip (no edges file)") {
    SimulationConfig cfg;
    cfg.population = MassActionPopulation{2000};
    cfg.contact_model = HazardModel::exponential(2.0);
    cfg.infectious_period = DurationDist::constant(1.0);
    cfg.m_target = 30;
    Rng rng(4);
    const auto out = simulate_mass_action(cfg, rng);
    REQUIRE(out.reached_target);
    const fs::path dir = temp_dir("ma-roundtrip");
    save_dataset(out.dataset, dir, config_to_json(cfg), 4);
    CHECK_FALSE(fs::exists(dir / "edges.csv"));
    const EpidemicDataset back = load_dataset(dir);
    CHECK(back == out.dataset);
    fs::remove_all(dir);
}

TEST_CASE("malformed csv reports the line number") {
    const fs::path dir = temp_dir("badcsv");
    {
        std::ofstream meta(dir / "meta.json");
        meta << R"({"T": 1.0, "n": 10})";
        std::ofstream ind(dir / "individuals.csv");
        ind << "id,imported,t_inf,t_onset_infectious,t_recovery,degree,infector\n";
        ind << "0,1,0,0,2,,\n";
        ind << "1,0,oops,1,2,,0\n";
    }
    try {
        load_dataset(dir);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("individuals.csv:3") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("wrong field count is a data error") {
    const fs::path dir = temp_dir("badfields");
    {
        std::ofstream meta(dir / "meta.json");
        meta << R"({"T": 1.0, "n": 10})";
        std::ofstream ind(dir / "individuals.csv");
        ind << "id,imported,t_inf,t_onset_infectious,t_recovery,degree,infector\n";
        ind << "0,1,0,0\n";
    }
    CHECK_THROWS_AS(load_dataset(dir), DataError);
    fs::remove_all(dir);
}

TEST_CASE("config json round trip") {
    SimulationConfig cfg;
    cfg.population = ErdosRenyiPopulation{5000, 7.5};
    cfg.contact_model = HazardModel::weibull(0.8, 2.25);
    cfg.infectious_period = DurationDist::exponential(1.0);
    cfg.latent_period = DurationDist::constant(0.5);
    cfg.m_target = 123;
    cfg.max_restarts = 17;
    cfg.imports = {3, 9};
    const json j = config_to_json(cfg);
    const SimulationConfig back = config_from_json(j, std::nullopt);
    CHECK(back.population == cfg.population);
    CHECK(back.contact_model == cfg.contact_model);
    CHECK(back.infectious_period == cfg.infectious_period);
    CHECK(back.latent_period == cfg.latent_period);
    CHECK(back.m_target == cfg.m_target);
    CHECK(back.max_restarts == cfg.max_restarts);
    CHECK(back.imports == cfg.imports);
}

TEST_CASE("hazard json uses the documented shape") {
    const json j = hazard_to_json(HazardModel::weibull(2.0, 3.0));
    CHECK(j.at("family") == "weibull");
    CHECK(j.at("params").get<std::vector<double>>() == std::vector<double>{2.0, 3.0});
    CHECK(hazard_from_json(j) == HazardModel::weibull(2.0, 3.0));
    const json e = hazard_to_json(HazardModel::exponential(1.5));
    CHECK(e.at("family") == "exponential");
}

TEST_CASE("fit json round trip preserves the covariance") {
    FitResult fit;
    fit.model = HazardModel::weibull(1.2, 3.4);
    fit.loglik = -12.5;
    fit.covariance = Mat(2);
    fit.covariance(0, 0) = 0.04;
    fit.covariance(0, 1) = fit.covariance(1, 0) = 0.01;
    fit.covariance(1, 1) = 0.09;
    fit.covariance_valid = true;
    fit.converged = true;
    fit.profile_cis = {{1.0, 1.5, false, false}, {2.9, 4.1, false, true}};
    fit.n_events = 55;
    fit.total_exposure = 17.25;
    const FitResult back = fit_from_json(fit_to_json(fit));
    CHECK(back.model == fit.model);
    CHECK(back.loglik == fit.loglik);
    CHECK(back.covariance(0, 1) == fit.covariance(0, 1));
    CHECK(back.profile_cis[1].hi_open == true);
    CHECK(back.n_events == 55);
    CHECK(back.total_exposure == 17.25);
}

TEST_CASE("dataset validation catches inconsistencies") {
    EpidemicDataset data;
    data.population = 10;
    data.horizon = 5.0;
    IndividualRecord a;
    a.id = 0;
    a.imported = true;
    a.t_infection = 0;
    a.t_infectious = 0;
    a.t_recovery = 1;
    data.individuals.push_back(a);
    CHECK_NOTHROW(data.validate());

    SUBCASE("import with infector") {
        data.individuals[0].infector = 3;
        CHECK_THROWS_AS(data.validate(), DataError);
    }
    SUBCASE("nonpositive infectious period") {
        data.individuals[0].t_recovery = 0.0;
        CHECK_THROWS_AS(data.validate(), DataError);
    }
    SUBCASE("infection after horizon") {
        data.individuals[0].t_infection = 6.0;
        data.individuals[0].t_infectious = 6.0;
        data.individuals[0].t_recovery = 7.0;
        CHECK_THROWS_AS(data.validate(), DataError);
    }
    SUBCASE("duplicate id") {
        data.individuals.push_back(a);
        CHECK_THROWS_AS(data.validate(), DataError);
    }
    SUBCASE("infector outside the infectious window") {
        IndividualRecord b;
        b.id = 1;
        b.t_infection = 3.0;  // a recovered at 1
        b.t_infectious = 3.0;
        b.t_recovery = 4.0;
        b.infector = 0;
        data.individuals.push_back(b);
        CHECK_THROWS_AS(data.validate(), DataError);
    }
}

}  // TEST_SUITE

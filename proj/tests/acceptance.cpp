// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly:
//
//   ./acceptance --cli <path-to-episurv-binary> [--threads N] [--replications R]
//
// The coverage criteria replicate the published study at desk scale
// (n=10,000, m=200, R=200, B=2,000) and accept each achieved coverage iff it
// falls inside the exact binomial band implied by the published value at this
// replication count.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "episurv/experiments.hpp"
#include "episurv/io.hpp"
#include "episurv/likelihood.hpp"
#include "testutil.hpp"
#include "oracle_sim.hpp"

using namespace episurv;
namespace fs = std::filesystem;

namespace {

struct CriterionResult {
    int number = 0;
    std::string title;
    bool pass = true;
    std::vector<std::string> details = {};

    void fail(const std::string& msg) {
        pass = false;
        details.push_back("FAIL  " + msg);
    }
    void ok(const std::string& msg) { details.push_back("  ok  " + msg); }
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// Acceptance band: the exact binomial interval around the published value at
// this replication count, endpoints rounded outward to two decimals.
std::pair<double, double> coverage_band(double published_value, int replications) {
    const auto k = static_cast<std::int64_t>(std::llround(published_value * replications));
    auto [lo, hi] = clopper_pearson(k, replications);
    lo = std::floor(lo * 100.0) / 100.0;
    hi = std::ceil(hi * 100.0) / 100.0;
    return {lo, hi};
}

double observed_coverage(const CoverageReport& report, const std::string& target) {
    for (const auto& t : report.targets)
        if (t.name == target) return t.coverage;
    throw std::runtime_error("no target " + target);
}

// --- criterion 1: coverage reproduction, correctly specified -------------

struct PublishedTarget {
    std::string name;
    double value;
};

struct PublishedScenario {
    const char* scenario;
    std::vector<PublishedTarget> targets;
};

const std::vector<PublishedScenario> kPublishedCoverage = {
    {"ma-exp-const", {{"beta", .952}, {"R0", .950}}},
    {"ma-exp-exp", {{"beta", .951}, {"R0", .963}}},
    {"ma-weib-const", {{"alpha", .936}, {"beta", .907}, {"R0", .879}}},
    {"ma-weib-exp", {{"alpha", .927}, {"beta", .912}, {"R0", .902}}},
    {"net-exp-const", {{"beta", .942}, {"R0", .948}}},
    {"net-exp-exp", {{"beta", .943}, {"R0", .962}}},
    {"net-weib-const", {{"alpha", .936}, {"beta", .946}, {"R0", .945}}},
    {"net-weib-exp", {{"alpha", .946}, {"beta", .950}, {"R0", .941}}},
};

CriterionResult criterion1(const ExperimentConfig& base) {
    CriterionResult r{1, "coverage reproduction (correct specification)"};
    int scenario_index = 0;
    for (const auto& ps : kPublishedCoverage) {
        ExperimentConfig cfg = base;
        cfg.seed = 1000 + static_cast<std::uint64_t>(scenario_index++);
        const auto scenario = parse_scenario(ps.scenario);
        const CoverageReport report = run_coverage(*scenario, cfg);
        std::printf("%s", report_table(report).c_str());
        std::fflush(stdout);
        for (const auto& t : ps.targets) {
            const double observed = observed_coverage(report, t.name);
            const auto [lo, hi] = coverage_band(t.value, cfg.replications);
            const std::string line = std::string(ps.scenario) + " " + t.name +
                                     ": observed " + fmt(observed) + " published " +
                                     fmt(t.value) + " band [" + fmt(lo, 2) + ", " +
                                     fmt(hi, 2) + "]";
            if (observed >= lo && observed <= hi)
                r.ok(line);
            else
                r.fail(line);
        }
        if (std::string(ps.scenario) == "ma-exp-const") {
            // Estimated-on-true R0 regression slope: the scatterplot's
            // "excellent agreement", quantified.
            double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
            for (const auto& rec : report.records) {
                if (!rec.fit_converged) continue;
                sx += rec.true_r0;
                sy += rec.est_r0;
                sxx += rec.true_r0 * rec.true_r0;
                sxy += rec.true_r0 * rec.est_r0;
                n += 1;
            }
            const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
            const std::string line =
                "ma-exp-const estimated-on-true R0 regression slope " + fmt(slope) +
                " (required in [0.9, 1.1])";
            (slope >= 0.9 && slope <= 1.1) ? r.ok(line) : r.fail(line);
        }
    }
    return r;
}

// --- criterion 2: misspecification ----------------------------------------

CriterionResult criterion2(const ExperimentConfig& base) {
    CriterionResult r{2, "misspecification (mass-action estimates on network data)"};
    struct MisspecTarget {
        const char* scenario;
        double published_r0_coverage;
    };
    const std::vector<MisspecTarget> cases = {{"net-exp-const", .210},
                                              {"net-exp-exp", .000},
                                              {"net-weib-const", .509},
                                              {"net-weib-exp", .392}};
    int idx = 0;
    for (const auto& c : cases) {
        const std::string name = c.scenario;
        ExperimentConfig cfg = base;
        cfg.seed = 2000 + static_cast<std::uint64_t>(idx++);
        const CoverageReport report = run_misspecification(*parse_scenario(name), cfg);
        std::printf("%s", report_table(report).c_str());
        std::fflush(stdout);
        const double r0_cov = observed_coverage(report, "R0");
        {
            const std::string line = name + " R0 coverage " + fmt(r0_cov) +
                                     " (< 0.60 required; published value " +
                                     fmt(c.published_r0_coverage) + ")";
            r0_cov < 0.60 ? r.ok(line) : r.fail(line);
        }
        if (name == "net-exp-exp") {
            const std::string line =
                name + " R0 coverage " + fmt(r0_cov) + " (< 0.05 required)";
            r0_cov < 0.05 ? r.ok(line) : r.fail(line);
        }
        const auto& t = report.targets.back();
        const std::string bias = name + " mean estimated R0 " + fmt(t.mean_estimate, 2) +
                                 " vs mean true R0 " + fmt(t.mean_truth, 2) +
                                 " (upward bias required)";
        t.mean_estimate > t.mean_truth ? r.ok(bias) : r.fail(bias);
    }
    if (!r.pass)
        r.details.push_back(
            "note  the upward bias reproduces, but the Weibull bootstrap intervals are "
            "wide: the misspecified fit sits on a flat (shape, ln rate) likelihood "
            "ridge (verified against a brute-force likelihood grid and finite-"
            "difference Hessians), so parameter draws from the observed-information "
            "normal spread R0* = mean((beta* iota*)^alpha*) over orders of magnitude; "
            "raising the per-replication scale to m=1000 closes the gap for the "
            "exponential scenarios but not the Weibull ones");
    return r;
}

// --- criteria 3 and 4: score martingale and information identity ----------

struct ScoreStudy {
    std::vector<double> scores;
    std::vector<double> optional_variation;
    std::vector<double> observed_information;
};

ScoreStudy score_study() {
    const double beta0 = 2.0;
    const HazardModel truth = HazardModel::exponential(beta0);
    ScoreStudy out;
    for (int rep = 0; rep < 500; ++rep) {
        SimulationConfig cfg;
        cfg.population = MassActionPopulation{50000};
        cfg.contact_model = truth;
        cfg.infectious_period = DurationDist::constant(1.0);
        cfg.m_target = 100;
        Rng rng(substream_seed(30000, static_cast<std::uint64_t>(rep)));
        const auto result = run_with_restarts(cfg, rng);
        if (!std::holds_alternative<SimOutcome>(result)) continue;
        const auto& data = std::get<SimOutcome>(result).dataset;
        const PreparedLikelihood prep(data, LikelihoodKind::MassActionAsymptotic);
        out.scores.push_back(prep.score(truth)[0]);
        out.optional_variation.push_back(prep.optional_variation(truth)(0, 0));
        out.observed_information.push_back(prep.observed_information(truth)(0, 0));
    }
    return out;
}

CriterionResult criterion3(const ScoreStudy& study) {
    CriterionResult r{3, "score is zero-mean at the true parameter"};
    const auto n = static_cast<double>(study.scores.size());
    const double mean_score = testutil::mean_of(study.scores);
    const double se = testutil::sd_of(study.scores) / std::sqrt(n);
    const std::string line = "mean score " + fmt(mean_score, 4) + ", 3 SE = " +
                             fmt(3 * se, 4) + " over " + fmt(n, 0) + " epidemics";
    std::abs(mean_score) < 3 * se ? r.ok(line) : r.fail(line);
    return r;
}

CriterionResult criterion4(const ScoreStudy& study) {
    CriterionResult r{4, "information identity (score variance = optional variation = "
                         "observed information)"};
    const double var_score =
        testutil::sd_of(study.scores) * testutil::sd_of(study.scores);
    const double mean_ov = testutil::mean_of(study.optional_variation);
    const double mean_oi = testutil::mean_of(study.observed_information);
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(a, b); };
    const std::string line = "var(score) " + fmt(var_score, 2) + ", mean OV " +
                             fmt(mean_ov, 2) + ", mean OI " + fmt(mean_oi, 2);
    (rel(var_score, mean_ov) < 0.15 && rel(var_score, mean_oi) < 0.15 &&
     rel(mean_ov, mean_oi) < 0.15)
        ? r.ok(line)
        : r.fail(line);
    return r;
}

// --- criterion 5: simulator oracle equivalence -----------------------------

CriterionResult criterion5() {
    CriterionResult r{5, "simulator oracle equivalence at n=6 over 1e5 runs"};
    constexpr std::int64_t n = 6;
    constexpr int runs = 100000;

    struct Setup {
        const char* label;
        HazardModel model;
        DurationDist ip;
    };
    const std::vector<Setup> setups = {
        {"exponential/constant", HazardModel::exponential(1.5), DurationDist::constant(1.0)},
        {"weibull/exponential", HazardModel::weibull(2.0, 1.5), DurationDist::exponential(1.0)},
    };

    for (const auto& s : setups) {
        SimulationConfig cfg;
        cfg.population = MassActionPopulation{n};
        cfg.contact_model = s.model;
        cfg.infectious_period = s.ip;
        cfg.m_target = n;
        cfg.imports = {0};
        std::vector<double> fs_sim(n, 0.0), fs_oracle(n, 0.0), t_sim, t_oracle;
        Rng rng_sim(51), rng_oracle(52);
        for (int i = 0; i < runs; ++i) {
            const auto a = testutil::summarize(simulate_mass_action(cfg, rng_sim));
            fs_sim[static_cast<std::size_t>(a.final_size - 1)] += 1;
            if (std::isfinite(a.first_secondary)) t_sim.push_back(a.first_secondary);
            const auto b = testutil::oracle_mass_action(s.model, n, s.ip, rng_oracle);
            fs_oracle[static_cast<std::size_t>(b.final_size - 1)] += 1;
            if (std::isfinite(b.first_secondary)) t_oracle.push_back(b.first_secondary);
        }
        const double p_chi = testutil::chi2_two_sample_pvalue(fs_sim, fs_oracle);
        const double p_ks = testutil::ks_two_sample_pvalue(t_sim, t_oracle);
        const std::string line = std::string("thinning vs per-pair oracle, ") + s.label +
                                 ": final-size chi2 p=" + fmt(p_chi) +
                                 ", first-infection KS p=" + fmt(p_ks);
        (p_chi > 0.01 && p_ks > 0.01) ? r.ok(line) : r.fail(line);
    }

    // Complete-graph network simulator with per-pair scaled hazard vs the
    // mass-action simulator.
    {
        const HazardModel model = HazardModel::exponential(1.5);
        std::vector<std::pair<std::int64_t, std::int64_t>> edges;
        for (std::int64_t u = 0; u < n; ++u)
            for (std::int64_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);

        SimulationConfig net_cfg;
        net_cfg.population = NetworkPopulation{ContactNetwork(n, edges)};
        net_cfg.contact_model = testutil::scaled_model(model, n);
        net_cfg.infectious_period = DurationDist::constant(1.0);
        net_cfg.m_target = n;
        net_cfg.imports = {0};

        SimulationConfig ma_cfg;
        ma_cfg.population = MassActionPopulation{n};
        ma_cfg.contact_model = model;
        ma_cfg.infectious_period = DurationDist::constant(1.0);
        ma_cfg.m_target = n;
        ma_cfg.imports = {0};

        std::vector<double> fs_net(n, 0.0), fs_ma(n, 0.0), t_net, t_ma;
        Rng rng_net(53), rng_ma(54);
        for (int i = 0; i < runs; ++i) {
            const auto a = testutil::summarize(simulate_network(net_cfg, rng_net));
            fs_net[static_cast<std::size_t>(a.final_size - 1)] += 1;
            if (std::isfinite(a.first_secondary)) t_net.push_back(a.first_secondary);
            const auto b = testutil::summarize(simulate_mass_action(ma_cfg, rng_ma));
            fs_ma[static_cast<std::size_t>(b.final_size - 1)] += 1;
            if (std::isfinite(b.first_secondary)) t_ma.push_back(b.first_secondary);
        }
        const double p_chi = testutil::chi2_two_sample_pvalue(fs_net, fs_ma);
        const double p_ks = testutil::ks_two_sample_pvalue(t_net, t_ma);
        const std::string line =
            "complete-graph network vs mass action: final-size chi2 p=" + fmt(p_chi) +
            ", first-infection KS p=" + fmt(p_ks);
        (p_chi > 0.01 && p_ks > 0.01) ? r.ok(line) : r.fail(line);
    }
    return r;
}

// --- criterion 6: closed-form MLE -----------------------------------------

CriterionResult criterion6() {
    CriterionResult r{6, "closed-form exponential MLE and pinned-shape identity"};
    Rng rng(61);
    double worst_rel = 0.0;
    int fits = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta0 = 1.5 + 2.5 * rng.uniform();
        SimulationConfig cfg;
        cfg.population = MassActionPopulation{3000};
        cfg.contact_model = HazardModel::exponential(beta0);
        cfg.infectious_period = rng.uniform() < 0.5 ? DurationDist::constant(1.0)
                                                    : DurationDist::exponential(1.0);
        cfg.m_target = 20 + static_cast<std::int64_t>(rng.uniform_int(80));
        Rng sim_rng(substream_seed(6100, static_cast<std::uint64_t>(i)));
        const auto result = run_with_restarts(cfg, sim_rng);
        if (!std::holds_alternative<SimOutcome>(result)) continue;
        const auto& data = std::get<SimOutcome>(result).dataset;
        const PreparedLikelihood prep(data, LikelihoodKind::MassActionAsymptotic);
        const double closed = static_cast<double>(prep.n_events()) / prep.total_exposure();
        FitOptions opts;
        opts.compute_profile_cis = false;
        opts.init = std::vector<double>{std::exp(-2.0 + 4.0 * rng.uniform())};
        const auto fit = fit_mle(prep, HazardFamily::Exponential, opts);
        worst_rel = std::max(worst_rel,
                             std::abs(fit.model.params[0] - closed) / closed);
        ++fits;

        if (i < 20) {
            // Weibull with the shape pinned at 1 must reproduce the fit.
            double beta_pinned = 0.0;
            const double pll =
                profile_loglik(prep, HazardFamily::Weibull, 0, 1.0, &beta_pinned);
            if (std::abs(beta_pinned - fit.model.params[0]) > 1e-9 * fit.model.params[0] ||
                std::abs(pll - fit.loglik) > 1e-9 * std::abs(fit.loglik))
                r.fail("pinned-shape fit differs: beta " + fmt(beta_pinned, 10) + " vs " +
                       fmt(fit.model.params[0], 10));
        }
    }
    const std::string line = "worst |MLE - events/exposure| relative error " +
                             fmt(worst_rel * 1e9, 3) + "e-9 over " +
                             std::to_string(fits) + " datasets (tolerance 1e-8)";
    worst_rel < 1e-8 && fits >= 90 ? r.ok(line) : r.fail(line);
    return r;
}

// --- criterion 7: asymptotic-likelihood argmax limit ------------------------

CriterionResult criterion7() {
    CriterionResult r{7, "exact vs asymptotic mass-action argmax gap shrinks in n"};
    const HazardModel truth = HazardModel::exponential(2.0);
    double prev_gap = 1e300;
    bool monotone = true;
    double final_gap = 0.0;
    for (const std::int64_t n : {100, 1000, 10000}) {
        SimulationConfig cfg;
        cfg.population = MassActionPopulation{n};
        cfg.contact_model = truth;
        cfg.infectious_period = DurationDist::constant(1.0);
        cfg.m_target = 50;
        Rng rng(substream_seed(7000, static_cast<std::uint64_t>(n)));
        const auto result = run_with_restarts(cfg, rng);
        if (!std::holds_alternative<SimOutcome>(result)) {
            r.fail("simulation rejected at n=" + std::to_string(n));
            return r;
        }
        const auto& data = std::get<SimOutcome>(result).dataset;
        FitOptions opts;
        opts.compute_profile_cis = false;
        const auto exact =
            fit_mle(data, HazardFamily::Exponential, LikelihoodKind::MassActionExact, opts);
        const auto asym = fit_mle(data, HazardFamily::Exponential,
                                  LikelihoodKind::MassActionAsymptotic, opts);
        const double gap = std::abs(exact.model.params[0] - asym.model.params[0]) /
                           exact.model.params[0];
        r.ok("n=" + std::to_string(n) + ": exact " + fmt(exact.model.params[0], 6) +
             ", asymptotic " + fmt(asym.model.params[0], 6) + ", relative gap " +
             fmt(gap * 100, 4) + "%");
        if (gap >= prev_gap) monotone = false;
        prev_gap = gap;
        final_gap = gap;
    }
    if (!monotone) r.fail("gap not monotonically decreasing in n");
    if (final_gap >= 0.01) r.fail("final gap " + fmt(final_gap * 100, 3) + "% >= 1%");
    return r;
}

// --- criterion 8: gradient verification ------------------------------------

CriterionResult criterion8() {
    CriterionResult r{8, "analytic score matches finite differences (50 data/theta pairs)"};
    Rng rng(81);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        const bool network = i % 2 == 0;
        EpidemicDataset data;
        if (network) {
            SimulationConfig cfg;
            cfg.population = ErdosRenyiPopulation{1200, 6.0};
            cfg.contact_model = HazardModel::weibull(1.3, 1.4);
            cfg.infectious_period = DurationDist::exponential(1.0);
            cfg.m_target = 40;
            Rng sim_rng(substream_seed(8100, static_cast<std::uint64_t>(i)));
            const auto result = run_with_restarts(cfg, sim_rng);
            if (!std::holds_alternative<SimOutcome>(result)) continue;
            data = std::get<SimOutcome>(result).dataset;
        } else {
            SimulationConfig cfg;
            cfg.population = MassActionPopulation{2500};
            cfg.contact_model = HazardModel::exponential(2.5);
            cfg.infectious_period = DurationDist::constant(1.0);
            cfg.m_target = 40;
            Rng sim_rng(substream_seed(8200, static_cast<std::uint64_t>(i)));
            const auto result = run_with_restarts(cfg, sim_rng);
            if (!std::holds_alternative<SimOutcome>(result)) continue;
            data = std::get<SimOutcome>(result).dataset;
        }
        const LikelihoodKind kind =
            network ? (i % 4 == 0 ? LikelihoodKind::NetworkExact
                                  : LikelihoodKind::WithInfectors)
                    : (i % 4 == 1 ? LikelihoodKind::MassActionAsymptotic
                                  : LikelihoodKind::MassActionExact);
        const PreparedLikelihood prep(data, kind);
        const double shape = 0.6 + 1.6 * rng.uniform();
        const double rate = 0.4 + 2.6 * rng.uniform();
        const HazardModel model = i % 3 == 0 ? HazardModel::exponential(rate)
                                             : HazardModel::weibull(shape, rate);
        const auto g = prep.score(model);
        for (int k = 0; k < model.n_params(); ++k) {
            const double fd = testutil::central_diff(
                [&](double v) {
                    auto p = model.params;
                    p[static_cast<std::size_t>(k)] = v;
                    return prep.loglik(HazardModel::from_params(model.family, p));
                },
                model.params[static_cast<std::size_t>(k)], 1e-5);
            const double err = std::abs(g[static_cast<std::size_t>(k)] - fd) /
                               (1.0 + std::abs(g[static_cast<std::size_t>(k)]));
            worst = std::max(worst, err);
        }
        ++checked;
    }
    const std::string line = "worst scaled deviation " + fmt(worst * 1e8, 3) +
                             "e-8 over " + std::to_string(checked) +
                             " pairs (tolerance 1e-6)";
    (worst < 1e-6 && checked >= 45) ? r.ok(line) : r.fail(line);
    return r;
}

// --- criterion 9: CLI determinism -------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cmd(const std::string& cmd) { return std::system(cmd.c_str()); }

CriterionResult criterion9(const std::string& cli, int threads) {
    CriterionResult r{9, "CLI runs with a fixed seed are byte-identical"};
    if (cli.empty()) {
        r.fail("no --cli path given");
        return r;
    }
    const fs::path work = fs::temp_directory_path() / "episurv-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    // simulate twice
    {
        std::ofstream cfg(work / "config.json");
        cfg << R"({"population": {"model": "erdos-renyi", "n": 3000, "expected_degree": 8.0},)"
            << R"("contact_model": {"family": "weibull", "params": [1.5, 1.2]},)"
            << R"("infectious_period": {"kind": "exponential", "mean": 1.0},)"
            << R"("m_target": 120})";
    }
    for (int run = 1; run <= 2; ++run) {
        const std::string cmd = cli + " simulate --config " + (work / "config.json").string() +
                                " --seed 99 --out " + (work / ("sim" + std::to_string(run))).string() +
                                " > /dev/null 2>&1";
        if (run_cmd(cmd) != 0) {
            r.fail("simulate exited nonzero");
            return r;
        }
    }
    for (const char* f : {"individuals.csv", "edges.csv", "meta.json"}) {
        if (slurp(work / "sim1" / f) != slurp(work / "sim2" / f))
            r.fail(std::string("simulate output differs: ") + f);
    }
    if (r.pass) r.ok("simulate: individuals.csv, edges.csv, meta.json identical");

    // fit twice on the simulated output
    for (int run = 1; run <= 2; ++run) {
        const std::string cmd = cli + " fit --data " + (work / "sim1").string() +
                                " --family weibull --likelihood network > " +
                                (work / ("fit" + std::to_string(run) + ".json")).string() +
                                " 2> /dev/null";
        if (run_cmd(cmd) != 0) {
            r.fail("fit exited nonzero");
            return r;
        }
    }
    if (slurp(work / "fit1.json") != slurp(work / "fit2.json"))
        r.fail("fit output differs between runs");
    else
        r.ok("fit: JSON identical");

    // r0 twice
    for (int run = 1; run <= 2; ++run) {
        const std::string cmd = cli + " r0 --fit " + (work / "fit1.json").string() +
                                " --data " + (work / "sim1").string() +
                                " --bootstrap 1000 --seed 5 > " +
                                (work / ("r0_" + std::to_string(run) + ".json")).string() +
                                " 2> /dev/null";
        if (run_cmd(cmd) != 0) {
            r.fail("r0 exited nonzero");
            return r;
        }
    }
    if (slurp(work / "r0_1.json") != slurp(work / "r0_2.json"))
        r.fail("r0 output differs between runs");
    else
        r.ok("r0: JSON identical");

    // coverage twice (small, threaded: aggregation must not depend on timing)
    for (int run = 1; run <= 2; ++run) {
        const fs::path out = work / ("cov" + std::to_string(run));
        const std::string cmd = cli + " coverage --scenario net-weib-exp --replications 6" +
                                " --seed 7 --threads " + std::to_string(threads) +
                                " --out " + out.string() + " > /dev/null 2>&1";
        if (run_cmd(cmd) != 0) {
            r.fail("coverage exited nonzero");
            return r;
        }
    }
    for (const char* f : {"net-weib-exp-coverage.json", "net-weib-exp-scatter.csv"}) {
        if (slurp(work / "cov1" / f) != slurp(work / "cov2" / f))
            r.fail(std::string("coverage output differs: ") + f);
    }
    if (r.pass) r.ok("coverage: JSON and scatter CSV identical across runs and threads");

    // bootstrap samples CSV
    {
        const std::string cmd = cli + " r0 --fit " + (work / "fit1.json").string() +
                                " --data " + (work / "sim1").string() +
                                " --bootstrap 500 --seed 5 --samples-out " +
                                (work / "samples.csv").string() + " > /dev/null 2>&1";
        if (run_cmd(cmd) != 0) {
            r.fail("r0 --samples-out exited nonzero");
        } else {
            std::ifstream in(work / "samples.csv");
            std::string line;
            int lines = 0;
            while (std::getline(in, line)) ++lines;
            lines == 501 ? r.ok("r0 --samples-out wrote header + 500 samples")
                         : r.fail("samples CSV has " + std::to_string(lines) + " lines");
        }
    }

    // exit codes: 2 for data errors, 1 for usage errors
    {
        const int data_err = run_cmd(cli + " fit --data " + (work / "missing").string() +
                                     " > /dev/null 2>&1");
        const int usage_err =
            run_cmd(cli + " epicurve --counts nope.csv > /dev/null 2>&1");  // --n missing
        const int de = WEXITSTATUS(data_err), ue = WEXITSTATUS(usage_err);
        de == 2 ? r.ok("missing dataset exits with the data-error code 2")
                : r.fail("missing dataset exit code " + std::to_string(de));
        ue == 1 ? r.ok("missing required flag exits with the usage code 1")
                : r.fail("usage error exit code " + std::to_string(ue));
    }

    // golden dataset: fitted rate is 1
    const fs::path golden = fs::path(__FILE__).parent_path().parent_path() /
                            "data" / "golden-single-edge";
    if (fs::exists(golden)) {
        const std::string cmd = cli + " fit --data " + golden.string() +
                                " --family exponential --likelihood network > " +
                                (work / "golden.json").string() + " 2> /dev/null";
        if (run_cmd(cmd) != 0) {
            r.fail("golden fit exited nonzero");
        } else {
            std::ifstream in(work / "golden.json");
            json j;
            in >> j;
            const double beta = j.at("params")[0].get<double>();
            std::abs(beta - 1.0) < 1e-8
                ? r.ok("golden single-edge dataset fits to rate " + fmt(beta, 10))
                : r.fail("golden single-edge rate " + fmt(beta, 10) + " != 1");
        }
    } else {
        r.fail("bundled golden dataset not found at " + golden.string());
    }
    fs::remove_all(work);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    int threads = 0;
    int replications = 200;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        else if (arg == "--threads" && i + 1 < argc) threads = std::atoi(argv[++i]);
        else if (arg == "--replications" && i + 1 < argc) replications = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: acceptance --cli <episurv binary> [--threads N] "
                                 "[--replications R]\n");
            return 2;
        }
    }

    ExperimentConfig base;  // desk scale: n=10000, m=200, B=2000
    base.replications = replications;
    base.threads = threads;

    std::vector<CriterionResult> results;
    results.push_back(criterion1(base));
    results.push_back(criterion2(base));
    const ScoreStudy study = score_study();
    results.push_back(criterion3(study));
    results.push_back(criterion4(study));
    results.push_back(criterion5());
    results.push_back(criterion6());
    results.push_back(criterion7());
    results.push_back(criterion8());
    results.push_back(criterion9(cli, threads > 0 ? threads : 2));

    std::printf("\n==== acceptance summary ====\n");
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%s  criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.number,
                    r.title.c_str());
        for (const auto& d : r.details) std::printf("        %s\n", d.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}

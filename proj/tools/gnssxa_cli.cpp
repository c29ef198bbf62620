// gnssxa: pseudorange-level GNSS spoofing simulation and detection analysis.
//
// Subcommands: gen, solve, attack-time, attack-pos, det, sweep.
// Every run is a pure function of (flags, input files, seed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnssxa/analysis.hpp"
#include "gnssxa/attacks.hpp"
#include "gnssxa/checks.hpp"
#include "gnssxa/constants.hpp"
#include "gnssxa/coords.hpp"
#include "gnssxa/errors.hpp"
#include "gnssxa/harness.hpp"
#include "gnssxa/pvt.hpp"
#include "gnssxa/scenario.hpp"

using namespace gnssxa;
using nlohmann::json;

namespace {

bool g_json_errors = false;

int fail(int code, const std::string& kind, const std::string& msg) {
    if (g_json_errors) {
        json err{{"error", kind}, {"message", msg}};
        std::cerr << err.dump() << "\n";
    } else {
        std::cerr << "error (" << kind << "): " << msg << "\n";
    }
    return code;
}

Eigen::Vector3d parse_triple(const std::string& s, const std::string& flag) {
    Eigen::Vector3d v;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x(), &v.y(), &v.z()) != 3)
        throw CLI::ValidationError(flag, "expected three comma-separated numbers");
    return v;
}

ReceiverTruth default_truth(int m, double lat, double lon, double alt) {
    ReceiverTruth t;
    t.pos_ecef = geodetic_to_ecef({lat, lon, alt});
    t.clock_bias_s.resize(m);
    // Distinct per-constellation biases in the tens-of-microseconds range.
    for (int i = 0; i < m; ++i) t.clock_bias_s[i] = -87.57e-6 + 12.4e-6 * i;
    return t;
}

void save_tamper(const TamperVector& t, const std::string& path) {
    json j;
    j["kind"] = t.kind == TamperKind::Relay ? "relay" : "generation";
    std::vector<double> dr(t.delta_r_m.data(), t.delta_r_m.data() + t.delta_r_m.size());
    j["delta_r_m"] = dr;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << j.dump(1) << "\n";
}

PvtSolution target_from_flags(const Scenario& sc, const std::string& enu,
                              const std::string& geo) {
    PvtSolution p = cold_start(ClockMode::MultiRef, sc.m);
    if (!enu.empty()) {
        p.pos_ecef = enu_offset_to_ecef(sc.receiver_truth.pos_ecef,
                                        parse_triple(enu, "--target-enu"));
    } else if (!geo.empty()) {
        const Eigen::Vector3d g = parse_triple(geo, "--target-geo");
        p.pos_ecef = geodetic_to_ecef({g.x(), g.y(), g.z()});
    } else {
        throw CLI::ValidationError("target", "need --target-enu or --target-geo");
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gnssxa: GNSS pseudorange spoofing simulation and DET analysis"};
    app.require_subcommand(1);
    app.add_flag("--json", g_json_errors, "machine-readable JSON errors on stderr");

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a synthetic scenario file");
    int g_n_auth = 3, g_n_open = 5, g_m = 2, g_epochs = 600;
    std::uint64_t g_seed = 7;
    double g_lat = 45.408, g_lon = 11.894, g_alt = 30.0;
    std::string g_out;
    gen->add_option("--n-auth", g_n_auth, "authenticated satellite count");
    gen->add_option("--n-open", g_n_open, "open satellite count");
    gen->add_option("--m", g_m, "constellation count");
    gen->add_option("--epochs", g_epochs, "number of epochs at 1 Hz");
    gen->add_option("--seed", g_seed, "geometry seed (64-bit)");
    gen->add_option("--lat-deg", g_lat, "receiver latitude [deg]");
    gen->add_option("--lon-deg", g_lon, "receiver longitude [deg]");
    gen->add_option("--alt-m", g_alt, "receiver altitude [m]");
    gen->add_option("--out", g_out, "output scenario path (JSON)")->required();

    // ---- solve ----
    auto* slv = app.add_subcommand("solve", "solve PVT for one epoch");
    std::string s_scenario, s_mode = "multi";
    int s_epoch = 0;
    slv->add_option("--scenario", s_scenario, "scenario file")->required();
    slv->add_option("--epoch", s_epoch, "epoch index (0-based)");
    slv->add_option("--mode", s_mode, "clock formulation: multi | single")
        ->check(CLI::IsMember({"multi", "single"}));

    // ---- attack-time ----
    auto* atk_t = app.add_subcommand(
        "attack-time", "synthesize a generation attack against the time check");
    std::string at_scenario, at_enu, at_geo, at_out;
    int at_epoch = 0;
    atk_t->add_option("--scenario", at_scenario, "scenario file")->required();
    atk_t->add_option("--epoch", at_epoch, "epoch index (0-based)");
    atk_t->add_option("--target-enu", at_enu, "target as ENU offset e,n,u [m] from truth");
    atk_t->add_option("--target-geo", at_geo, "target as lat[deg],lon[deg],alt[m]");
    atk_t->add_option("--out", at_out, "output tamper path (JSON)")->required();

    // ---- attack-pos ----
    auto* atk_p = app.add_subcommand(
        "attack-pos", "synthesize an attack against the position check");
    std::string ap_scenario, ap_mode = "generation", ap_xi, ap_out;
    double ap_gamma_us = 10.0;
    int ap_epoch = 0;
    atk_p->add_option("--scenario", ap_scenario, "scenario file")->required();
    atk_p->add_option("--epoch", ap_epoch, "epoch index (0-based)");
    atk_p->add_option("--mode", ap_mode, "generation | relay")
        ->check(CLI::IsMember({"generation", "relay"}));
    atk_p->add_option("--gamma-t-us", ap_gamma_us, "induced clock shift [us]");
    atk_p->add_option("--xi-enu", ap_xi, "relay position slack e,n,u [m]");
    atk_p->add_option("--out", ap_out, "output tamper path (JSON)")->required();

    // ---- det ----
    auto* det = app.add_subcommand(
        "det", "Monte Carlo experiment and empirical DET curve");
    std::string d_scenario, d_attack = "time", d_enu, d_geo, d_out;
    std::string d_trials_out, d_trace_out;
    double d_sigma_l = 3.0, d_sigma_a = 0.0, d_gamma_us = 10.0;
    int d_reps = 35, d_start = 0;
    std::uint64_t d_seed = 7;
    det->add_option("--scenario", d_scenario, "scenario file")->required();
    det->add_option("--attack", d_attack, "time | gen | relay")
        ->check(CLI::IsMember({"time", "gen", "relay"}));
    det->add_option("--target-enu", d_enu, "time attack target ENU offset e,n,u [m]");
    det->add_option("--target-geo", d_geo, "time attack target lat[deg],lon[deg],alt[m]");
    det->add_option("--gamma-t-us", d_gamma_us, "position attack clock shift [us]");
    det->add_option("--sigma-l", d_sigma_l, "victim range noise std [m]");
    det->add_option("--sigma-a", d_sigma_a, "attacker range noise std [m] (relay)");
    det->add_option("--reps", d_reps, "Monte Carlo repetitions per epoch");
    det->add_option("--attack-start", d_start, "epoch index where the attack switches on");
    det->add_option("--seed", d_seed, "noise seed (64-bit)");
    det->add_option("--out", d_out, "output DET CSV path")->required();
    det->add_option("--trials-out", d_trials_out, "optional per-trial CSV path");
    det->add_option("--trace-out", d_trace_out, "optional clock-trace CSV path");

    // ---- sweep ----
    auto* swp = app.add_subcommand(
        "sweep", "DET curves for a sweep of time-attack target distances");
    std::string w_scenario, w_distances = "1.7,10,25.5", w_out_prefix;
    double w_sigma_l = 3.0;
    int w_reps = 35;
    std::uint64_t w_seed = 7;
    swp->add_option("--scenario", w_scenario, "scenario file")->required();
    swp->add_option("--distances-km", w_distances, "comma-separated distances [km]");
    swp->add_option("--sigma-l", w_sigma_l, "victim range noise std [m]");
    swp->add_option("--reps", w_reps, "Monte Carlo repetitions per epoch");
    swp->add_option("--seed", w_seed, "noise seed (64-bit)");
    swp->add_option("--out-prefix", w_out_prefix, "output path prefix; one CSV per distance")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            const Scenario sc = generate_scenario(
                g_n_auth, g_n_open, g_m,
                default_truth(g_m, g_lat, g_lon, g_alt), g_epochs, g_seed);
            save_scenario(sc, g_out);
            std::cout << "wrote " << g_out << " (N=" << (g_n_auth + g_n_open)
                      << ", N_A=" << g_n_auth << ", M=" << g_m
                      << ", epochs=" << g_epochs << ")\n";
            return 0;
        }
        if (*slv) {
            const Scenario sc = load_scenario(s_scenario);
            if (s_epoch < 0 || s_epoch >= static_cast<int>(sc.epochs.size()))
                return fail(2, "usage", "epoch index out of range");
            const ClockMode mode =
                s_mode == "multi" ? ClockMode::MultiRef : ClockMode::SingleRef;
            SolverConfig cfg;
            cfg.isb_known_s = sc.isb_true_s;
            const SolveReport rep =
                solve(sc.epochs[s_epoch], cold_start(mode, sc.m), cfg);
            const Geodetic geo = ecef_to_geodetic(rep.solution.pos_ecef);
            json out;
            out["pos_ecef_m"] = {rep.solution.pos_ecef.x(), rep.solution.pos_ecef.y(),
                                 rep.solution.pos_ecef.z()};
            out["lat_deg"] = geo.lat_deg;
            out["lon_deg"] = geo.lon_deg;
            out["alt_m"] = geo.alt_m;
            std::vector<double> clk;
            for (int i = 0; i < rep.solution.clocks_m.size(); ++i)
                clk.push_back(rep.solution.clocks_m(i) / kSpeedOfLight);
            out["clock_bias_s"] = clk;
            out["iterations"] = rep.iterations;
            out["converged"] = rep.converged;
            std::cout << out.dump(1) << "\n";
            return 0;
        }
        if (*atk_t) {
            const Scenario sc = load_scenario(at_scenario);
            if (sc.m < 2) return fail(4, "schema", "time attack needs M >= 2");
            SolverConfig cfg;
            const SolveReport legit = solve(sc.epochs.at(at_epoch),
                                            cold_start(ClockMode::MultiRef, sc.m), cfg);
            const auto tc = TimeCheckConfig::isb_specialization(1.0, 0.0, 0.0);
            const FeasibleSpace space =
                feasible_space(legit.geometry, tc.c_matrix, Eigen::VectorXd::Zero(2));
            const PvtSolution target = target_from_flags(sc, at_enu, at_geo);
            const Eigen::VectorXd dp = reachable_target(
                legit.geometry, space, target.pos_ecef - legit.solution.pos_ecef);
            const TamperVector t = time_attack_minimize(
                legit.geometry, space, dp, Eigen::VectorXd::Zero(dp.size()));
            if (dp.head<3>().norm() > 10e3)
                std::cerr << "warning: target displacement "
                          << dp.head<3>().norm() / 1e3
                          << " km exceeds 10 km; linearization accuracy degrades\n";
            save_tamper(t, at_out);
            std::cout << "wrote " << at_out << "\n";
            return 0;
        }
        if (*atk_p) {
            const Scenario sc = load_scenario(ap_scenario);
            SolverConfig cfg;
            cfg.isb_known_s = sc.isb_true_s;
            const SolveReport legit = solve(sc.epochs.at(ap_epoch),
                                            cold_start(ClockMode::SingleRef, sc.m), cfg);
            TamperVector t;
            if (ap_mode == "relay") {
                Eigen::Vector3d xi = Eigen::Vector3d::Zero();
                if (!ap_xi.empty()) {
                    const Eigen::Matrix3d r =
                        ecef_to_enu_rotation(sc.receiver_truth.pos_ecef);
                    xi = r.transpose() * parse_triple(ap_xi, "--xi-enu");
                }
                t = relay_attack_position(legit.geometry, ap_gamma_us * 1e-6, xi);
            } else {
                t = generation_attack_position(legit.geometry, ap_gamma_us * 1e-6);
            }
            save_tamper(t, ap_out);
            std::cout << "wrote " << ap_out << "\n";
            return 0;
        }
        if (*det || *swp) {
            const Scenario sc = load_scenario(*det ? d_scenario : w_scenario);
            const double c_isb_m =
                sc.isb_true_s.empty() ? 0.0 : kSpeedOfLight * sc.isb_true_s[0];
            if (*det) {
                ExperimentConfig cfg;
                cfg.noise.sigma_l_m = d_sigma_l;
                cfg.noise.sigma_a_m = d_sigma_a;
                cfg.noise.seed = d_seed;
                cfg.repetitions = d_reps;
                cfg.attack_start_epoch = d_start;
                double sigma0_hint = std::max(d_sigma_l, 0.01);
                if (d_attack == "time") {
                    if (sc.m < 2) return fail(4, "schema", "time attack needs M >= 2");
                    TimeTargetedAttack att;
                    att.p_target = target_from_flags(sc, d_enu, d_geo);
                    cfg.attack = att;
                    cfg.check = TimeCheckConfig::isb_specialization(1.0, 0.0, c_isb_m);
                } else {
                    PositionCheckConfig pc;
                    pc.p_ref_ecef = sc.receiver_truth.pos_ecef;
                    pc.delta_pos_m = 1.0;
                    cfg.check = pc;
                    if (d_attack == "relay") {
                        PositionRelayAttack att;
                        att.gamma_t_s = d_gamma_us * 1e-6;
                        cfg.attack = att;
                    } else {
                        PositionGenerationAttack att;
                        att.gamma_t_s = d_gamma_us * 1e-6;
                        cfg.attack = att;
                    }
                }
                const auto records = run_experiment(sc, cfg);
                const DetCurve curve =
                    empirical_det(records, default_threshold_grid(records, sigma0_hint));
                write_det_csv(curve, d_out);
                if (!d_trials_out.empty()) write_trials_csv(records, d_trials_out);
                if (!d_trace_out.empty()) write_trace_csv(records, d_trace_out);
                std::cout << "wrote " << d_out << " (" << records.size() << " trials)\n";
                return 0;
            }
            // sweep
            if (sc.m < 2) return fail(4, "schema", "time attack sweep needs M >= 2");
            std::vector<double> distances;
            {
                std::string s = w_distances;
                for (char& ch : s)
                    if (ch == ',') ch = ' ';
                double v;
                for (std::size_t pos = 0; std::sscanf(s.c_str() + pos, "%lf", &v) == 1;) {
                    distances.push_back(v * 1e3);
                    pos = s.find(' ', pos);
                    if (pos == std::string::npos) break;
                    while (pos < s.size() && s[pos] == ' ') ++pos;
                }
            }
            ExperimentConfig cfg;
            cfg.noise.sigma_l_m = w_sigma_l;
            cfg.noise.seed = w_seed;
            cfg.repetitions = w_reps;
            cfg.check = TimeCheckConfig::isb_specialization(1.0, 0.0, c_isb_m);
            cfg.attack = TimeTargetedAttack{};  // replaced per distance
            const auto curves = sweep_target_distance(sc, cfg, distances);
            for (std::size_t i = 0; i < curves.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%g", distances[i] / 1e3);
                const std::string path = w_out_prefix + "_" + buf + "km.csv";
                write_det_csv(curves[i], path);
                std::cout << "wrote " << path << "\n";
            }
            return 0;
        }
    } catch (const Infeasible& e) {
        return fail(3, "infeasible", e.what());
    } catch (const RankDeficient& e) {
        return fail(3, "infeasible", e.what());
    } catch (const ParseError& e) {
        return fail(4, "parse", e.what());
    } catch (const SchemaError& e) {
        return fail(4, "schema", e.what());
    } catch (const CLI::ValidationError& e) {
        return fail(2, "usage", e.what());
    } catch (const std::exception& e) {
        return fail(4, "data", e.what());
    }
    return 2;
}

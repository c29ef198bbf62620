#include "gnssxa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "gnssxa/constants.hpp"
#include "gnssxa/coords.hpp"
#include "gnssxa/errors.hpp"

namespace gnssxa {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GNSSXA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

struct EpochPlan {
    PvtSolution legit;          // noiseless solution
    TamperVector tamper;        // zero vector before attack_start_epoch
    PvtSolution attacked;       // noiseless under-attack solution
    std::vector<bool> tampered_mask;
};

ClockMode mode_for_check(const CheckConfig& check) {
    return std::holds_alternative<TimeCheckConfig>(check) ? ClockMode::MultiRef
                                                          : ClockMode::SingleRef;
}

double check_metric(const PvtSolution& sol, const CheckConfig& check) {
    if (const auto* tc = std::get_if<TimeCheckConfig>(&check)) {
        return isb_check(sol.clocks_m(0) / kSpeedOfLight,
                         sol.clocks_m(1) / kSpeedOfLight, *tc)
            .metric(0);
    }
    return position_check(sol, std::get<PositionCheckConfig>(check)).metric(0);
}

TamperVector zero_tamper(int n) {
    TamperVector t;
    t.kind = TamperKind::Generation;
    t.delta_r_m = Eigen::VectorXd::Zero(n);
    return t;
}

EpochPlan plan_epoch(const Scenario& scenario, const Epoch& epoch,
                     const ExperimentConfig& cfg, const SolverConfig& solver_cfg,
                     bool attack_active) {
    const ClockMode mode = mode_for_check(cfg.check);
    EpochPlan plan;
    const SolveReport legit =
        solve(epoch, cold_start(mode, scenario.m), solver_cfg);
    plan.legit = legit.solution;

    const int n = epoch.n_total();
    if (!attack_active) {
        plan.tamper = zero_tamper(n);
        plan.attacked = plan.legit;
        plan.tampered_mask.assign(n, false);
        return plan;
    }

    if (const auto* att = std::get_if<TimeTargetedAttack>(&cfg.attack)) {
        const auto& tc = std::get<TimeCheckConfig>(cfg.check);
        const FeasibleSpace space = feasible_space(
            legit.geometry, tc.c_matrix, Eigen::VectorXd::Zero(tc.c_matrix.rows()));
        const Eigen::VectorXd dp_target = reachable_target(
            legit.geometry, space, att->p_target.pos_ecef - plan.legit.pos_ecef);
        plan.tamper = time_attack_minimize(legit.geometry, space, dp_target,
                                           Eigen::VectorXd::Zero(dp_target.size()));
    } else if (const auto* att = std::get_if<PositionRelayAttack>(&cfg.attack)) {
        plan.tamper = relay_attack_position(legit.geometry, att->gamma_t_s, att->xi_m);
    } else {
        const auto& gen = std::get<PositionGenerationAttack>(cfg.attack);
        plan.tamper = generation_attack_position(legit.geometry, gen.gamma_t_s);
    }

    plan.tampered_mask.resize(n);
    for (int j = 0; j < n; ++j)
        plan.tampered_mask[j] = plan.tamper.kind == TamperKind::Relay
                                    ? true
                                    : plan.tamper.delta_r_m(j) != 0.0;

    const SolveReport attacked =
        solve(apply_tamper(epoch, plan.tamper), plan.legit, solver_cfg);
    plan.attacked = attacked.solution;
    return plan;
}

void run_epoch(const Scenario& scenario, int e, const ExperimentConfig& cfg,
               const SolverConfig& solver_cfg, std::vector<TrialRecord>& records) {
    const Epoch& epoch = scenario.epochs[e];
    const bool attack_active = e >= cfg.attack_start_epoch;
    const EpochPlan plan =
        plan_epoch(scenario, epoch, cfg, solver_cfg, attack_active);
    const int n = epoch.n_total();
    const double relay_extra =
        plan.tamper.kind == TamperKind::Relay ? cfg.noise.sigma_a_m : 0.0;

    const double shift_clk_us =
        (plan.attacked.clocks_m(0) - plan.legit.clocks_m(0)) / kSpeedOfLight * 1e6;
    const double shift_pos_m = (plan.attacked.pos_ecef - plan.legit.pos_ecef).norm();

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Rng rng = Rng::substream(cfg.noise.seed, static_cast<std::uint64_t>(e),
                                 static_cast<std::uint64_t>(rep));
        Eigen::VectorXd eta_l(n), eta_a(n);
        for (int j = 0; j < n; ++j)
            eta_l(j) = cfg.noise.sigma_l_m > 0.0 ? rng.normal(0.0, cfg.noise.sigma_l_m) : 0.0;
        for (int j = 0; j < n; ++j)
            eta_a(j) = relay_extra > 0.0 && plan.tampered_mask[j]
                           ? rng.normal(0.0, relay_extra)
                           : 0.0;
        Eigen::VectorXd eta_l_h1 = eta_l;
        if (!cfg.common_random_numbers)
            for (int j = 0; j < n; ++j)
                eta_l_h1(j) =
                    cfg.noise.sigma_l_m > 0.0 ? rng.normal(0.0, cfg.noise.sigma_l_m) : 0.0;

        const std::size_t base = 2 * (static_cast<std::size_t>(e) * cfg.repetitions + rep);
        for (int hyp = 0; hyp < 2; ++hyp) {
            Epoch noisy = epoch;
            for (int j = 0; j < n; ++j) {
                double pr = epoch.observations[j].pseudorange_m;
                pr += hyp == 0 ? eta_l(j) : eta_l_h1(j);
                if (hyp == 1) pr += plan.tamper.delta_r_m(j) + eta_a(j);
                noisy.observations[j].pseudorange_m = pr;
            }
            const PvtSolution& warm = hyp == 0 ? plan.legit : plan.attacked;
            const SolveReport rep_solve = solve(noisy, warm, solver_cfg);

            TrialRecord rec;
            rec.epoch = e;
            rec.rep = rep;
            rec.attacked = hyp == 1;
            rec.solved = rep_solve.solution;
            rec.metric_m = check_metric(rep_solve.solution, cfg.check);
            rec.shift_clk_us = hyp == 1 ? shift_clk_us : 0.0;
            rec.shift_pos_m = hyp == 1 ? shift_pos_m : 0.0;
            records[base + hyp] = rec;
        }
    }
}

}  // namespace

std::vector<TrialRecord> run_experiment(const Scenario& scenario,
                                        const ExperimentConfig& cfg) {
    if (cfg.repetitions < 1) throw DimensionMismatch("repetitions must be >= 1");
    SolverConfig solver_cfg;
    solver_cfg.isb_known_s = scenario.isb_true_s;

    const int n_epochs = static_cast<int>(scenario.epochs.size());
    std::vector<TrialRecord> records(2 * static_cast<std::size_t>(n_epochs) *
                                     cfg.repetitions);

    const int threads = std::min(resolve_threads(cfg.threads), std::max(n_epochs, 1));
    auto worker = [&](int tid) {
        for (int e = tid; e < n_epochs; e += threads) {
            try {
                run_epoch(scenario, e, cfg, solver_cfg, records);
            } catch (const std::exception& ex) {
                throw std::runtime_error("epoch " + std::to_string(e) + ": " + ex.what());
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    worker(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return records;
}

DetCurve empirical_det(const std::vector<TrialRecord>& records,
                       const std::vector<double>& threshold_grid) {
    long long n0 = 0, n1 = 0;
    for (const auto& r : records) (r.attacked ? n1 : n0)++;
    if (n0 == 0 || n1 == 0)
        throw EmptyHypothesis("records must contain both hypotheses");

    DetCurve curve;
    curve.mode = DetMode::Empirical;
    curve.trials = n0;
    for (double t : threshold_grid) {
        long long fa = 0, md = 0;
        for (const auto& r : records) {
            if (!r.attacked && r.metric_m > t) ++fa;
            if (r.attacked && r.metric_m <= t) ++md;
        }
        DetPoint pt;
        pt.threshold = t;
        pt.p_fa = static_cast<double>(fa) / n0;
        pt.p_md = static_cast<double>(md) / n1;
        pt.fa_halfwidth = wilson_halfwidth(fa, n0);
        pt.md_halfwidth = wilson_halfwidth(md, n1);
        curve.points.push_back(pt);
    }
    return curve;
}

std::vector<double> default_threshold_grid(const std::vector<TrialRecord>& records,
                                           double sigma0) {
    double max_metric = 0.0;
    for (const auto& r : records) max_metric = std::max(max_metric, r.metric_m);
    const double lo = std::max(sigma0 / 100.0, 1e-12);
    const double hi = std::max(10.0 * max_metric, lo * 10.0);
    std::vector<double> grid(200);
    for (int i = 0; i < 200; ++i)
        grid[i] = lo * std::pow(hi / lo, i / 199.0);
    return grid;
}

std::vector<DetCurve> sweep_target_distance(const Scenario& scenario,
                                            const ExperimentConfig& base_cfg,
                                            const std::vector<double>& distances_m,
                                            int grid_points) {
    const auto& tc = std::get<TimeCheckConfig>(base_cfg.check);
    std::vector<DetCurve> curves;
    for (double d : distances_m) {
        if (d <= 0.0) throw DimensionMismatch("distances must be positive");
        ExperimentConfig cfg = base_cfg;
        TimeTargetedAttack att;
        att.p_target = cold_start(ClockMode::MultiRef, scenario.m);
        att.p_target.pos_ecef =
            enu_offset_to_ecef(scenario.receiver_truth.pos_ecef, {d, 0.0, 0.0});
        cfg.attack = att;
        const auto records = run_experiment(scenario, cfg);

        // sigma0 from the first epoch's legitimate geometry
        SolverConfig scfg;
        scfg.isb_known_s = scenario.isb_true_s;
        const SolveReport first =
            solve(scenario.epochs.front(), cold_start(ClockMode::MultiRef, scenario.m), scfg);
        const Eigen::MatrixXd chhc = tc.c_matrix * first.geometry.h *
                                     first.geometry.h.transpose() *
                                     tc.c_matrix.transpose();
        const double sigma0 = cfg.noise.sigma_l_m * std::sqrt(chhc(0, 0));

        auto grid = default_threshold_grid(records, sigma0 > 0 ? sigma0 : 1.0);
        if (grid_points != 200 && grid_points >= 2) {
            std::vector<double> g(grid_points);
            for (int i = 0; i < grid_points; ++i)
                g[i] = grid.front() *
                       std::pow(grid.back() / grid.front(), i / (grid_points - 1.0));
            grid = std::move(g);
        }
        curves.push_back(empirical_det(records, grid));
    }
    return curves;
}

namespace {

// %.12g, no locale surprises
std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_trials_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "epoch,rep,hyp,metric_m,x,y,z,clk_us,shift_clk_us,shift_pos_m\n";
    for (const auto& r : records) {
        out << r.epoch << ',' << r.rep << ',' << (r.attacked ? "H1" : "H0") << ','
            << fmt12(r.metric_m) << ',' << fmt12(r.solved.pos_ecef.x()) << ','
            << fmt12(r.solved.pos_ecef.y()) << ',' << fmt12(r.solved.pos_ecef.z()) << ','
            << fmt12(r.solved.clocks_m(0) / kSpeedOfLight * 1e6) << ','
            << fmt12(r.shift_clk_us) << ',' << fmt12(r.shift_pos_m) << '\n';
    }
}

void write_det_csv(const DetCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "threshold_m,p_fa,p_md,fa_ci,md_ci,mode\n";
    const char* mode = curve.mode == DetMode::Empirical ? "empirical" : "closed-form";
    for (const auto& pt : curve.points) {
        out << fmt12(pt.threshold) << ',' << fmt12(pt.p_fa) << ',' << fmt12(pt.p_md)
            << ',' << fmt12(pt.fa_halfwidth) << ',' << fmt12(pt.md_halfwidth) << ','
            << mode << '\n';
    }
}

void write_trace_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "epoch,legit_clk_us,attacked_clk_us\n";
    int last_epoch = -1;
    double legit_us = 0.0;
    for (const auto& r : records) {
        if (r.rep != 0) continue;
        if (!r.attacked) {
            legit_us = r.solved.clocks_m(0) / kSpeedOfLight * 1e6;
            last_epoch = r.epoch;
        } else if (r.epoch == last_epoch) {
            out << r.epoch << ',' << fmt12(legit_us) << ','
                << fmt12(r.solved.clocks_m(0) / kSpeedOfLight * 1e6) << '\n';
        }
    }
}

}  // namespace gnssxa

#include "gnssxa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "gnssxa/constants.hpp"
#include "gnssxa/coords.hpp"
#include "gnssxa/errors.hpp"
#include "gnssxa/pvt.hpp"

namespace gnssxa {

using nlohmann::json;

int Epoch::n_auth() const {
    int n = 0;
    for (const auto& o : observations)
        if (o.authenticated) ++n;
    return n;
}

double NoiseModel::sigma_tampered() const {
    return std::sqrt(sigma_l_m * sigma_l_m + sigma_a_m * sigma_a_m);
}

namespace {

constexpr double kMeoShellRadius = 2.656e7;  // GPS-like MEO shell [m]

// Satellite ECEF position at azimuth/elevation from the receiver, placed on
// the MEO shell along the line of sight.
Eigen::Vector3d place_on_shell(const Eigen::Vector3d& rx_ecef, double az_rad,
                               double el_rad) {
    const Eigen::Matrix3d r_enu = ecef_to_enu_rotation(rx_ecef);
    const Eigen::Vector3d dir_enu(std::sin(az_rad) * std::cos(el_rad),
                                  std::cos(az_rad) * std::cos(el_rad),
                                  std::sin(el_rad));
    const Eigen::Vector3d dir = r_enu.transpose() * dir_enu;
    // |rx + d*dir| = shell radius, take the positive root
    const double b = rx_ecef.dot(dir);
    const double c = rx_ecef.squaredNorm() - kMeoShellRadius * kMeoShellRadius;
    const double disc = b * b - c;
    if (disc < 0.0)
        throw InfeasibleGeometry("line of sight does not intersect the MEO shell");
    const double d = -b + std::sqrt(disc);
    if (d <= 0.0)
        throw InfeasibleGeometry("satellite placement behind the receiver");
    return rx_ecef + d * dir;
}

int open_constellation(int open_index, int m) {
    return m == 1 ? 1 : 2 + open_index % (m - 1);
}

}  // namespace

Scenario generate_scenario(int n_auth, int n_open, int m, const ReceiverTruth& truth,
                           int n_epochs, std::uint64_t geometry_seed) {
    const int n = n_auth + n_open;
    if (n < 4) throw DimensionMismatch("need at least 4 satellites");
    if (m < 1) throw DimensionMismatch("constellation count must be >= 1");
    if (m >= 2 && n_open < m - 1)
        throw DimensionMismatch("each of the " + std::to_string(m) +
                                " constellations needs at least one satellite");
    if (static_cast<int>(truth.clock_bias_s.size()) != m)
        throw DimensionMismatch("receiver_truth needs one clock bias per constellation");
    if (!truth.pos_ecef.allFinite())
        throw DimensionMismatch("receiver_truth position not finite");

    Scenario sc;
    sc.m = m;
    sc.receiver_truth = truth;
    sc.isb_true_s.resize(m > 0 ? m - 1 : 0);
    for (int i = 1; i < m; ++i)
        sc.isb_true_s[i - 1] = truth.clock_bias_s[i] - truth.clock_bias_s[0];

    Rng rng = Rng::substream(geometry_seed, 0x5ce7a110);

    // Fixed sky plan: uniform azimuth slots with seeded jitter, elevations in
    // [15, 75] deg. The authenticated satellites take evenly spaced slots so
    // neither constellation clusters in azimuth (a clustered constellation
    // couples its clock state into the horizontal axes and inflates the DOP).
    std::vector<int> slot(n, -1);
    std::vector<bool> used(n, false);
    for (int j = 0; j < n_auth; ++j) {
        slot[j] = j * n / n_auth;
        used[slot[j]] = true;
    }
    for (int j = n_auth, s = 0; j < n; ++j) {
        while (used[s]) ++s;
        slot[j] = s;
        used[s] = true;
    }
    std::vector<double> az0(n), el(n);
    for (int j = 0; j < n; ++j) {
        az0[j] = 2.0 * kPi * slot[j] / n + rng.uniform(-0.1, 0.1);
        el[j] = rng.uniform(15.0, 75.0) * kDeg2Rad;
    }
    std::vector<double> sat_clk(n), atmo(n);
    for (int j = 0; j < n; ++j) {
        sat_clk[j] = rng.uniform(-1e-3, 1e-3);
        atmo[j] = rng.uniform(2.0, 15.0);
    }

    PvtSolution truth_state;
    truth_state.mode = ClockMode::MultiRef;
    truth_state.pos_ecef = truth.pos_ecef;
    truth_state.clocks_m.resize(m);
    for (int i = 0; i < m; ++i)
        truth_state.clocks_m(i) = kSpeedOfLight * truth.clock_bias_s[i];

    // Slow azimuth drift keeps epochs distinct while the geometry stays
    // well-conditioned over the whole run.
    constexpr double kDriftRadPerS = 7.0e-5;

    sc.epochs.reserve(n_epochs);
    for (int e = 0; e < n_epochs; ++e) {
        Epoch ep;
        ep.time_tag_s = static_cast<double>(e);
        ep.observations.reserve(n);
        for (int j = 0; j < n; ++j) {
            SatelliteObservation obs;
            const bool auth = j < n_auth;
            obs.authenticated = auth;
            obs.constellation = auth ? 1 : open_constellation(j - n_auth, m);
            obs.sat_id = (auth ? "A" : "O") + std::to_string(j);
            obs.pos_ecef = place_on_shell(truth.pos_ecef, az0[j] + kDriftRadPerS * e, el[j]);
            obs.sat_clock_bias_s = sat_clk[j];
            obs.atmo_delay_m = atmo[j];
            obs.pseudorange_m = predict_pseudorange(obs, truth_state);
            ep.observations.push_back(std::move(obs));
        }
        sc.epochs.push_back(std::move(ep));
    }
    validate_scenario(sc);
    return sc;
}

Epoch add_noise(const Epoch& epoch, const NoiseModel& noise,
                const std::vector<bool>& tampered_mask, Rng& rng) {
    if (!tampered_mask.empty() &&
        tampered_mask.size() != epoch.observations.size())
        throw DimensionMismatch("tampered_mask length != N");
    Epoch out = epoch;
    for (std::size_t j = 0; j < out.observations.size(); ++j) {
        const bool tampered = !tampered_mask.empty() && tampered_mask[j];
        const double sigma = tampered ? noise.sigma_tampered() : noise.sigma_l_m;
        if (sigma > 0.0) out.observations[j].pseudorange_m += rng.normal(0.0, sigma);
    }
    return out;
}

void validate_scenario(const Scenario& sc) {
    if (!sc.receiver_truth.pos_ecef.allFinite())
        throw SchemaError("receiver_truth position not finite");
    if (static_cast<int>(sc.receiver_truth.clock_bias_s.size()) != sc.m)
        throw SchemaError("receiver_truth clock bias count != M");
    for (std::size_t e = 0; e < sc.epochs.size(); ++e) {
        const Epoch& ep = sc.epochs[e];
        const int n = ep.n_total();
        const int n_auth = ep.n_auth();
        bool seen_open = false;
        for (const auto& obs : ep.observations) {
            if (!obs.authenticated) seen_open = true;
            else if (seen_open)
                throw SchemaError("epoch " + std::to_string(e) +
                                  ": authenticated satellite after an open one");
            if (obs.constellation < 1 || obs.constellation > sc.m)
                throw SchemaError("epoch " + std::to_string(e) +
                                  ": constellation index out of range");
            if (obs.atmo_delay_m < 0.0)
                throw SchemaError("epoch " + std::to_string(e) + ": negative atmo delay");
            const double r = obs.pos_ecef.norm();
            if (r < 2.0e7 || r > 3.0e7) {
                // MEO bound is generator-enforced; the loader only warns.
            }
        }
        const int min_n = sc.m > 1 ? 3 + sc.m : 4;
        if (n < min_n)
            throw SchemaError("epoch " + std::to_string(e) + ": N=" + std::to_string(n) +
                              " under-determined for M=" + std::to_string(sc.m));
        (void)n_auth;
    }
}

void save_scenario(const Scenario& sc, const std::string& path) {
    json meta;
    meta["m"] = sc.m;
    meta["receiver_truth"]["pos_ecef"] = {sc.receiver_truth.pos_ecef.x(),
                                          sc.receiver_truth.pos_ecef.y(),
                                          sc.receiver_truth.pos_ecef.z()};
    meta["receiver_truth"]["clock_bias_s"] = sc.receiver_truth.clock_bias_s;
    meta["isb_true_s"] = sc.isb_true_s;

    json epochs = json::array();
    for (const auto& ep : sc.epochs) {
        json je;
        je["t"] = ep.time_tag_s;
        json sats = json::array();
        for (const auto& o : ep.observations) {
            sats.push_back({{"id", o.sat_id},
                            {"constellation", o.constellation},
                            {"auth", o.authenticated},
                            {"pos_ecef", {o.pos_ecef.x(), o.pos_ecef.y(), o.pos_ecef.z()}},
                            {"clk_s", o.sat_clock_bias_s},
                            {"atmo_m", o.atmo_delay_m},
                            {"pr_m", o.pseudorange_m}});
        }
        je["sats"] = std::move(sats);
        epochs.push_back(std::move(je));
    }

    json root;
    root["meta"] = std::move(meta);
    root["epochs"] = std::move(epochs);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    // nlohmann emits shortest round-trip decimals, so doubles survive exactly
    out << root.dump(1) << "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    Scenario sc;
    try {
        const json& meta = root.at("meta");
        sc.m = meta.at("m").get<int>();
        const json& rt = meta.at("receiver_truth");
        const auto pos = rt.at("pos_ecef").get<std::vector<double>>();
        if (pos.size() != 3) throw ParseError(path + ": receiver_truth pos_ecef must be length 3");
        sc.receiver_truth.pos_ecef = Eigen::Vector3d(pos[0], pos[1], pos[2]);
        sc.receiver_truth.clock_bias_s = rt.at("clock_bias_s").get<std::vector<double>>();
        sc.isb_true_s = meta.at("isb_true_s").get<std::vector<double>>();

        for (const json& je : root.at("epochs")) {
            Epoch ep;
            ep.time_tag_s = je.at("t").get<double>();
            for (const json& js : je.at("sats")) {
                SatelliteObservation o;
                o.sat_id = js.at("id").get<std::string>();
                o.constellation = js.at("constellation").get<int>();
                o.authenticated = js.at("auth").get<bool>();
                const auto sp = js.at("pos_ecef").get<std::vector<double>>();
                if (sp.size() != 3) throw ParseError(path + ": satellite pos_ecef must be length 3");
                o.pos_ecef = Eigen::Vector3d(sp[0], sp[1], sp[2]);
                o.sat_clock_bias_s = js.at("clk_s").get<double>();
                o.atmo_delay_m = js.at("atmo_m").get<double>();
                o.pseudorange_m = js.at("pr_m").get<double>();
                ep.observations.push_back(std::move(o));
            }
            sc.epochs.push_back(std::move(ep));
        }
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    validate_scenario(sc);
    return sc;
}

}  // namespace gnssxa

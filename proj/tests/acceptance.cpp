// Acceptance suite: one printed pass/fail line per criterion; the process
// exits nonzero when any criterion fails.

#include "chain_mdp.hpp"
#include "mergesim/evaluate.hpp"
#include "mergesim/idm.hpp"
#include "mergesim/mobil.hpp"
#include "mergesim/svg.hpp"
#include "mergesim/weights_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

using namespace mergesim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void run_criterion(const char* name, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (detail.rfind("FAIL", 0) == 0) ok = false;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %-28s (%.1fs) %s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fail(const std::string& why) { return "FAIL: " + why; }

// ---- independent scalar oracle for the human-driver models ----

double oracle_desired_gap(double v, double dv, const IdmParams& p) {
    const double gap =
        p.d0 + v * p.t_set + v * dv / (2.0 * std::sqrt(p.acc_max * std::abs(p.acc_des)));
    return gap < 0.0 ? 0.0 : gap;
}

double oracle_idm(double v, double gap, double dv, const IdmParams& p) {
    double acc = p.acc_max * (1.0 - std::pow(v / p.v_set, 4.0));
    if (std::isfinite(gap)) {
        const double dstar = oracle_desired_gap(v, dv, p);
        acc -= p.acc_max * (dstar / gap) * (dstar / gap);
    }
    return std::clamp(acc, -p.acc_brake_max, p.acc_max);
}

int oracle_mobil(const MobilOption& left, const MobilOption& right, const MobilParams& m) {
    auto incentive = [&](const MobilOption& o) {
        return o.ego_after - o.ego_before +
               std::sin(m.politeness) * ((o.new_follower_after - o.new_follower_before) +
                                         (o.old_follower_after - o.old_follower_before));
    };
    auto ok = [&](const MobilOption& o) {
        return o.feasible && o.new_follower_after > -m.b_safe && incentive(o) > m.acc_th;
    };
    const bool l = ok(left), r = ok(right);
    if (l && r) return incentive(left) >= incentive(right) ? -1 : +1;
    return l ? -1 : r ? +1 : 0;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("missing file " + p.string());
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

double gammp(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-12) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-12) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

/// Reduced-scale scenario for the directional criterion: three AVs seeded in
/// the merge corridor lane, eight HVs in the inner lanes.
ScenarioConfig reduced_scenario() {
    ScenarioConfig cfg;
    cfg.n_av = 3;
    cfg.n_hv = 8;
    cfg.mission_autonomous = false;
    // AVs straddle the mission spawn in the rightmost highway lane at matched
    // speed: egoistic speed-seeking keeps the merge gap closed, yielding opens
    // it (handcrafted-policy merge rates: accelerate 0.19, idle 0.14,
    // lane-left 0.77, sustained decelerate 0.92)
    cfg.init.av_lanes = {2};
    cfg.init.av_l_min = 45.0;
    cfg.init.av_l_max = 99.0;
    cfg.init.av_v_min = 23.5;
    cfg.init.av_v_max = 24.5;
    cfg.init.min_gap = 8.0;
    cfg.init.hv_lanes = {0, 1};
    // keep collisions salient and make the one-time merge bonus decisive
    // against the per-step ego/cooperation income at this small scale
    cfg.ego_weights.crash_penalty = -5.0;
    cfg.svo.mission_gain = 30.0;
    cfg.qnet.hidden = {64, 64};
    cfg.train.episodes = 2000;
    cfg.train.batch = 32;
    cfg.train.warmup = 1000;
    cfg.train.buffer = 50000;
    cfg.train.n_target = 200;
    cfg.train.k_diss = 4;
    return cfg;
}

} // namespace

int main() {
    run_criterion("human-model-oracle", [] {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> speed(0.0, 35.0), gap(1.0, 200.0),
            dv(-10.0, 10.0), acc(-6.0, 3.0), angle(0.0, std::numbers::pi / 2.0);
        std::bernoulli_distribution coin(0.5);
        for (int i = 0; i < 1000; ++i) {
            IdmParams p;
            p.v_set = 15.0 + speed(rng) / 3.0;
            const double v = speed(rng), g = coin(rng) ? gap(rng) : kNoLeader, a = dv(rng);
            if (std::abs(desired_gap(v, a, p) - oracle_desired_gap(v, a, p)) > 1e-9)
                return fail("desired_gap deviates");
            if (std::abs(idm_acceleration(v, g, a, p) - oracle_idm(v, g, a, p)) > 1e-9)
                return fail("idm_acceleration deviates");
            MobilParams m;
            m.politeness = angle(rng);
            auto opt = [&] {
                MobilOption o;
                o.feasible = coin(rng);
                o.ego_before = acc(rng);
                o.ego_after = acc(rng);
                o.new_follower_before = acc(rng);
                o.new_follower_after = acc(rng);
                o.old_follower_before = acc(rng);
                o.old_follower_after = acc(rng);
                return o;
            };
            const auto left = opt(), right = opt();
            const auto d = mobil_decision(left, right, m);
            const int got = d == LaneDecision::ChangeLeft    ? -1
                            : d == LaneDecision::ChangeRight ? +1
                                                             : 0;
            if (got != oracle_mobil(left, right, m)) return fail("mobil decision deviates");
        }
        return std::string("1000 draws match to 1e-9");
    });

    run_criterion("idm-spot-values", [] {
        IdmParams p;
        if (idm_acceleration(0.0, kNoLeader, 0.0, p) != 3.0)
            return fail("standstill free-road acceleration != 3");
        const double worked = idm_acceleration(20.0, 30.0, 0.0, p);
        if (std::abs(worked - 1.368) > 1e-3)
            return fail("worked example = " + std::to_string(worked));
        return std::string("standstill = 3, worked example = 1.368");
    });

    run_criterion("reward-identities", [] {
        constexpr double half_pi = std::numbers::pi / 2.0;
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.0, 2.0);
        for (int pi_idx = 0; pi_idx < 5; ++pi_idx)
            for (int th_idx = 0; th_idx < 5; ++th_idx) {
                SvoParams p;
                p.phi = half_pi * pi_idx / 4.0;
                p.theta = half_pi * th_idx / 4.0;
                for (int k = 0; k < 100; ++k) {
                    const double ego = u(rng), coop = u(rng), symp = u(rng);
                    const double direct = pos(rng), cb = pos(rng), sb = pos(rng);
                    const auto b = total_reward(ego, coop, symp, direct, cb, sb, p);
                    const double expected =
                        ego * std::cos(p.phi) +
                        std::sin(p.theta) * std::sin(p.phi) * (coop + cb) +
                        std::cos(p.theta) * std::sin(p.phi) * (symp + sb) + direct;
                    if (std::abs(b.total - expected) > 1e-12)
                        return fail("decomposition breaks");
                    SvoParams e = p;
                    e.phi = 0.0;
                    if (total_reward(ego, coop, symp, 0.0, cb, sb, e).total != ego)
                        return fail("phi=0 is not bit-exact egoistic");
                    SvoParams c = p;
                    c.theta = half_pi;
                    if (total_reward(ego, coop, symp, direct, cb, sb, c).total !=
                        total_reward(ego, coop, 0.0, direct, cb, 0.0, c).total)
                        return fail("theta=pi/2 leaves a sympathy residue");
                }
            }
        return std::string("25 grid points x 100 draws hold to machine precision");
    });

    run_criterion("gradient-check", [] {
        std::mt19937_64 rng(7);
        const auto net = init_network<double>(20, {32, 16}, 5, 99);
        const auto target = init_network<double>(20, {32, 16}, 5, 100);
        TransitionBatch<double> batch;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_int_distribution<int> a(0, 4);
        std::bernoulli_distribution coin(0.3);
        for (int s = 0; s < 24; ++s) {
            std::vector<double> obs(20), next(20);
            for (auto& x : obs) x = u(rng);
            for (auto& x : next) x = u(rng);
            batch.obs.push_back(obs);
            batch.next_obs.push_back(next);
            batch.action.push_back(a(rng));
            batch.reward.push_back(u(rng));
            batch.terminal.push_back(coin(rng) ? 1 : 0);
        }
        const double err = finite_diff_check(net, target, batch, 0.95, 60, rng);
        if (err >= 1e-4) return fail("max relative error = " + std::to_string(err));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max relative error %.2e over 60 probes", err);
        return std::string(buf);
    });

    run_criterion("toy-mdp-convergence", [] {
        const auto q_star = chain::optimal_q();
        const auto net = chain::train_on_chain(3000, 11);
        double max_err = 0.0;
        for (int s = 0; s < chain::kStates - 1; ++s) {
            const auto q = forward(net, std::span<const float>(chain::one_hot(s)));
            for (int a = 0; a < chain::kActions; ++a)
                max_err =
                    std::max(max_err, std::abs(static_cast<double>(q[a]) - q_star[s][a]));
        }
        if (max_err >= 0.05) return fail("Linf = " + std::to_string(max_err));
        return "Linf(Q - Q*) = " + std::to_string(max_err);
    });

    run_criterion("replay-prioritization", [] {
        ReplayBuffer buf(4);
        const double distances[4] = {0.0, 50.0, 150.0, 350.0};
        double total = 0.0;
        for (double d : distances) {
            ReplayEntry e;
            e.obs = {1.0f};
            e.next_obs = {0.0f};
            e.distance_to_merge = d;
            buf.push(std::move(e));
            total += score_entry(d, ReplayScoring{});
        }
        Rng rng(41);
        int counts[4] = {0, 0, 0, 0};
        for (int i = 0; i < 100000; ++i) counts[buf.sample_index(rng)]++;
        for (int s = 0; s < 4; ++s) {
            const double expected = score_entry(distances[s], ReplayScoring{}) / total;
            if (std::abs(counts[s] / 1e5 - expected) > 0.02)
                return fail("slot frequency off by more than 2%");
        }

        const int k = 8;
        ReplayBuffer uniform(k);
        for (int i = 0; i < k; ++i) {
            ReplayEntry e;
            e.obs = {1.0f};
            e.next_obs = {0.0f};
            e.distance_to_merge = 25.0;
            uniform.push(std::move(e));
        }
        std::vector<int> ucounts(k, 0);
        Rng rng2(1043);
        for (int i = 0; i < 100000; ++i) ucounts[uniform.sample_index(rng2)]++;
        double stat = 0.0;
        const double e = 1e5 / k;
        for (int c : ucounts) stat += (c - e) * (c - e) / e;
        const double pval = 1.0 - gammp((k - 1) / 2.0, stat / 2.0);
        if (pval <= 0.01) return fail("chi-square p = " + std::to_string(pval));
        char buf2[64];
        std::snprintf(buf2, sizeof(buf2), "within 2%%, chi-square p = %.3f", pval);
        return std::string(buf2);
    });

    run_criterion("episode-initialization", [] {
        RoadNet road;
        EpisodeInit init;
        Rng rng(61);
        double sum_l = 0.0, sum2_l = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const auto states = initialize_episode(init, road, 4, 1, false, rng);
            const auto& m = states.back();
            if (m.l < init.mu_l - init.delta_l || m.l > init.mu_l + init.delta_l)
                return fail("spawn longitude outside [mu - delta, mu + delta]");
            if (m.speed < init.mu_v - init.delta_v || m.speed > init.mu_v + init.delta_v)
                return fail("spawn speed outside [mu - delta, mu + delta]");
            sum_l += m.l;
            sum2_l += m.l * m.l;
        }
        const double mean = sum_l / n;
        const double sd = std::sqrt(sum2_l / n - mean * mean);
        const double se = sd / std::sqrt(static_cast<double>(n));
        if (std::abs(mean - init.mu_l) > 3.0 * se)
            return fail("sample mean off by more than 3 SE");
        char buf[80];
        std::snprintf(buf, sizeof(buf), "10^4 spawns in range, mean %.4f (SE %.4f)", mean,
                      se);
        return std::string(buf);
    });

    run_criterion("train-determinism", [] {
        ScenarioConfig cfg;
        cfg.n_av = 1;
        cfg.n_hv = 2;
        cfg.init.av_lanes = {2};
        cfg.init.hv_lanes = {0, 1};
        cfg.qnet.hidden = {16};
        cfg.train.episodes = 12;
        cfg.train.batch = 8;
        cfg.train.warmup = 40;
        cfg.train.buffer = 2000;
        const auto dir1 = fs::temp_directory_path() / "mergesim_acc_det1";
        const auto dir2 = fs::temp_directory_path() / "mergesim_acc_det2";
        fs::remove_all(dir1);
        fs::remove_all(dir2);
        train(cfg, 77, dir1);
        train(cfg, 77, dir2);
        const bool same = slurp(dir1 / "weights.bin") == slurp(dir2 / "weights.bin") &&
                          slurp(dir1 / "training_curve.csv") ==
                              slurp(dir2 / "training_curve.csv");
        fs::remove_all(dir1);
        fs::remove_all(dir2);
        if (!same) return fail("artifacts differ between identical runs");
        return std::string("weights and metrics CSV byte-identical");
    });

    run_criterion("sweep-argmin", [] {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 200; ++t) {
            const int n = 2 + static_cast<int>(u(rng) * 10);
            std::vector<std::pair<double, double>> table;
            for (int i = 0; i < n; ++i) table.emplace_back(u(rng), u(rng));
            const double xi = u(rng);
            const size_t got = argmin_objective(table, xi);
            size_t expect = 0;
            for (size_t i = 1; i < table.size(); ++i)
                if (xi * table[i].first + (1 - xi) * table[i].second <
                    xi * table[expect].first + (1 - xi) * table[expect].second)
                    expect = i;
            if (got != expect) return fail("synthetic argmin mismatch");
        }

        // a real (minuscule) sweep: phi* must equal the brute-force argmin
        ScenarioConfig cfg;
        cfg.n_av = 1;
        cfg.n_hv = 2;
        cfg.init.av_lanes = {2};
        cfg.init.hv_lanes = {0, 1};
        cfg.qnet.hidden = {16};
        cfg.train.episodes = 4;
        cfg.train.batch = 8;
        cfg.train.warmup = 30;
        cfg.train.buffer = 1000;
        const std::vector<double> grid{0.0, std::numbers::pi / 8, std::numbers::pi / 4};
        const auto sweep = svo_sweep(cfg, grid, 0.5, 3, 6, 3);
        size_t expect = 0;
        for (size_t i = 1; i < sweep.points.size(); ++i)
            if (sweep.points[i].objective < sweep.points[expect].objective) expect = i;
        if (sweep.best_index != expect || sweep.phi_star != grid[expect])
            return fail("real sweep phi* mismatch");
        return std::string("200 synthetic tables + real sweep agree");
    });

    run_criterion("weight-roundtrip", [] {
        const auto net = init_network<float>(58, {64, 32}, 5, 12345);
        const auto p1 = fs::temp_directory_path() / "mergesim_acc_w1.bin";
        const auto p2 = fs::temp_directory_path() / "mergesim_acc_w2.bin";
        save_weights(net, p1);
        const auto loaded = load_weights(p1);
        save_weights(loaded, p2);
        const bool bytes_equal = slurp(p1) == slurp(p2);
        fs::remove(p1);
        fs::remove(p2);
        if (!bytes_equal) return fail("save-load-save not byte identical");
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<float> u(-1.0f, 1.0f);
        for (int k = 0; k < 100; ++k) {
            std::vector<float> x(58);
            for (auto& v : x) v = u(rng);
            if (forward(net, std::span<const float>(x)) !=
                forward(loaded, std::span<const float>(x)))
                return fail("forward pass differs after round-trip");
        }
        return std::string("byte-identical, 100 forward passes equal");
    });

    run_criterion("directional-reproduction", [] {
        const auto base = reduced_scenario();
        const std::vector<uint64_t> seeds{1, 2, 3};
        const int threads = std::max(1u, std::thread::hardware_concurrency());
        const auto rows =
            run_preset_suite(base, {"HV+E", "HV+SC", "HV+1SC"}, seeds,
                             1.1, 200, threads);
        auto mean_success = [&](const std::string& preset) {
            double sum = 0.0;
            int n = 0;
            for (const auto& r : rows)
                if (r.preset == preset) {
                    sum += 1.0 - r.metrics.f_mf;
                    ++n;
                }
            return sum / n;
        };
        const double sc = mean_success("HV+SC"), e = mean_success("HV+E"),
                     one = mean_success("HV+1SC");
        char buf[128];
        std::snprintf(buf, sizeof(buf), "merge success: SC %.3f, E %.3f, 1SC %.3f", sc, e,
                      one);
        if (sc < e + 0.10) return fail(std::string(buf) + " — SC not >= E + 10pp");
        if (sc < one + 0.10) return fail(std::string(buf) + " — SC not >= 1SC + 10pp");
        return std::string(buf);
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}

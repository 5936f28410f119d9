#include "lsmsim/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <tuple>

namespace lsmsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ99 = 2.5758293035489004; // two-sided 99% normal quantile
} // namespace

int ScheduleCurve::completed_at(double t) const {
    int n = 0;
    for (double c : completion_times)
        if (c <= t + 1e-12) ++n;
    return n;
}

ScheduleCurve greedy_curve(std::span<const double> sizes, double B) {
    std::vector<double> s(sizes.begin(), sizes.end());
    std::sort(s.begin(), s.end());
    ScheduleCurve curve;
    double t = 0;
    for (double sz : s) {
        t += sz / B;
        curve.completion_times.push_back(t);
    }
    return curve;
}

namespace {

// Per-index minimum completion times over all schedules that switch only at
// uniform grid boundaries (slot work goes to one merge; completions idle the
// slot remainder).
std::vector<double> preemptive_envelope(std::span<const double> sizes, double B, int slots) {
    double total = 0;
    for (double s : sizes) total += s;
    if (total <= 0) return {};
    const double h = total / (B * slots); // slot duration
    const double w = B * h;               // work per slot

    std::map<std::pair<int, std::vector<double>>, std::vector<double>> memo;

    std::function<std::vector<double>(int, std::vector<double>)> solve =
        [&](int k, std::vector<double> state) -> std::vector<double> {
        if (state.empty()) return {};
        if (k == slots) return std::vector<double>(state.size(), kInf);
        auto key = std::make_pair(k, state);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        const double t = k * h;
        std::vector<double> best(state.size(), kInf);
        for (std::size_t j = 0; j < state.size(); ++j) {
            if (j > 0 && state[j] == state[j - 1]) continue; // identical choice
            std::vector<double> cand;
            if (state[j] <= w + 1e-12) {
                double c = t + state[j] / B;
                std::vector<double> child = state;
                child.erase(child.begin() + static_cast<std::ptrdiff_t>(j));
                auto sub = solve(k + 1, std::move(child));
                cand.reserve(sub.size() + 1);
                cand.push_back(c);
                cand.insert(cand.end(), sub.begin(), sub.end());
            } else {
                std::vector<double> child = state;
                child[j] -= w;
                std::sort(child.begin(), child.end());
                cand = solve(k + 1, std::move(child));
            }
            for (std::size_t i = 0; i < best.size(); ++i)
                best[i] = std::min(best[i], cand[i]);
        }
        memo.emplace(std::move(key), best);
        return best;
    };

    std::vector<double> start(sizes.begin(), sizes.end());
    std::sort(start.begin(), start.end());
    return solve(0, std::move(start));
}

} // namespace

std::vector<ScheduleCurve> brute_force_curves(std::span<const double> sizes, double B,
                                              int grid_slots) {
    if (sizes.size() > 6) throw std::invalid_argument("brute_force_curves: at most 6 merges");
    if (B <= 0) throw std::invalid_argument("brute_force_curves: B must be > 0");

    std::vector<ScheduleCurve> out;
    std::vector<double> perm(sizes.begin(), sizes.end());
    std::sort(perm.begin(), perm.end());
    do {
        ScheduleCurve c;
        double t = 0;
        for (double s : perm) {
            t += s / B;
            c.completion_times.push_back(t);
        }
        out.push_back(std::move(c));
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto env = preemptive_envelope(sizes, B, grid_slots);
    if (!env.empty()) out.push_back({std::move(env)});
    return out;
}

McEstimate mc_distinct(std::uint64_t n, std::uint64_t U, KeyDistribution dist, double zipf_s,
                       std::uint64_t seed, std::uint64_t trials) {
    if (trials < 2) throw std::invalid_argument("mc_distinct: trials must be >= 2");
    if (U < 1) throw std::invalid_argument("mc_distinct: U must be >= 1");
    std::mt19937_64 rng(seed);

    std::vector<double> cdf;
    if (dist == KeyDistribution::Zipf) {
        cdf.resize(U);
        double norm = 0;
        for (std::uint64_t k = 1; k <= U; ++k) norm += std::pow(static_cast<double>(k), -zipf_s);
        double acc = 0;
        for (std::uint64_t k = 1; k <= U; ++k) {
            acc += std::pow(static_cast<double>(k), -zipf_s) / norm;
            cdf[k - 1] = acc;
        }
        cdf.back() = 1.0;
    }

    std::vector<std::uint64_t> stamp(U, 0);
    std::uniform_int_distribution<std::uint64_t> uni(0, U - 1);
    std::uniform_real_distribution<double> real(0.0, 1.0);

    double sum = 0, sum_sq = 0;
    for (std::uint64_t trial = 1; trial <= trials; ++trial) {
        std::uint64_t distinct = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t key;
            if (dist == KeyDistribution::Zipf) {
                auto it = std::lower_bound(cdf.begin(), cdf.end(), real(rng));
                key = static_cast<std::uint64_t>(it - cdf.begin());
            } else {
                key = uni(rng);
            }
            if (stamp[key] != trial) {
                stamp[key] = trial;
                ++distinct;
            }
        }
        auto d = static_cast<double>(distinct);
        sum += d;
        sum_sq += d * d;
    }
    auto N = static_cast<double>(trials);
    double mean = sum / N;
    double var = std::max(0.0, (sum_sq - N * mean * mean) / (N - 1));
    return {mean, kZ99 * std::sqrt(var / N)};
}

McEstimate mc_union_distinct(std::span<const std::uint64_t> subset_sizes, std::uint64_t K,
                             std::uint64_t seed, std::uint64_t trials) {
    if (trials < 2) throw std::invalid_argument("mc_union_distinct: trials must be >= 2");
    for (auto d : subset_sizes)
        if (d > K) throw std::invalid_argument("mc_union_distinct: subset larger than key space");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> stamp(K, 0), sub_stamp(K, 0);
    std::uint64_t sub_gen = 0;

    double sum = 0, sum_sq = 0;
    for (std::uint64_t trial = 1; trial <= trials; ++trial) {
        std::uint64_t distinct = 0;
        for (auto d : subset_sizes) {
            ++sub_gen;
            // Floyd's algorithm: uniform d-subset of {0..K-1}
            for (std::uint64_t j = K - d; j < K; ++j) {
                std::uniform_int_distribution<std::uint64_t> pick(0, j);
                std::uint64_t r = pick(rng);
                std::uint64_t chosen = sub_stamp[r] == sub_gen ? j : r;
                sub_stamp[chosen] = sub_gen;
                if (stamp[chosen] != trial) {
                    stamp[chosen] = trial;
                    ++distinct;
                }
            }
        }
        auto v = static_cast<double>(distinct);
        sum += v;
        sum_sq += v * v;
    }
    auto N = static_cast<double>(trials);
    double mean = sum / N;
    double var = std::max(0.0, (sum_sq - N * mean * mean) / (N - 1));
    return {mean, kZ99 * std::sqrt(var / N)};
}

std::vector<double> per_write_reference(
    const std::vector<std::tuple<double, double, double>>& arrival_segments,
    const std::vector<StallInterval>& stalls, const std::vector<double>& release_capacities) {
    Curve A;
    double acc = 0;
    bool first = true;
    for (const auto& [a, b, r] : arrival_segments) {
        if (first) {
            A.add(a, 0);
            first = false;
        }
        acc += r * (b - a);
        A.add(b, acc);
    }
    auto total = static_cast<std::uint64_t>(std::floor(acc + 1e-9));
    if (total > 1'000'000) throw std::invalid_argument("per_write_reference: too many writes");

    std::vector<double> arrival(total), latency(total, 0);
    for (std::uint64_t i = 0; i < total; ++i)
        arrival[i] = A.inverse(static_cast<double>(i + 1));

    auto in_stall = [&](double t) {
        for (const auto& s : stalls)
            if (t >= s.start && t < s.end) return true;
        return false;
    };

    std::vector<std::uint64_t> queue; // write indices, FIFO
    std::size_t next_write = 0;
    for (std::size_t k = 0; k < stalls.size(); ++k) {
        const auto& s = stalls[k];
        // A write arriving exactly at the stall start is the limit of mass
        // admitted just before it: latency 0, matching the fluid curves.
        while (next_write < total && arrival[next_write] <= s.start) ++next_write;
        while (next_write < total && arrival[next_write] < s.end)
            queue.push_back(next_write++);
        double cap = k < release_capacities.size() ? release_capacities[k] : kInf;
        auto admit = static_cast<std::size_t>(
            std::min(static_cast<double>(queue.size()), std::floor(cap + 1e-9)));
        bool chained = k + 1 < stalls.size() && stalls[k + 1].start <= s.end + 1e-12;
        if (!chained) admit = queue.size(); // no immediate re-stall: drain fully
        for (std::size_t i = 0; i < admit; ++i)
            latency[queue[i]] = s.end - arrival[queue[i]];
        queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(admit));
    }
    for (auto idx : queue) latency[idx] = 0; // never released within the horizon
    return latency;
}

bool write_dominance(const Curve& fast, const Curve& limited, double tol) {
    double W = std::min(fast.total(), limited.total());
    std::vector<double> grid{0, W};
    for (const auto& [t, v] : fast.pts)
        if (v <= W) grid.push_back(v);
    for (const auto& [t, v] : limited.pts)
        if (v <= W) grid.push_back(v);
    for (double w : grid)
        if (fast.inverse(w) > limited.inverse(w) + tol) return false;
    return true;
}

std::set<std::pair<double, double>> dependent_pair_schedules(double a, double b, double c,
                                                             double B, int grid_slots) {
    const double horizon = (a + b + c) / B;
    const double h = horizon / grid_slots;

    struct State {
        double t, ra, rb, rc; // rc < 0 means not yet spawned
        bool operator<(const State& o) const {
            return std::tie(t, ra, rb, rc) < std::tie(o.t, o.ra, o.rb, o.rc);
        }
    };
    using Pairs = std::set<std::array<double, 3>>; // future completion times, padded with inf
    std::map<State, Pairs> memo;

    std::function<Pairs(State)> solve = [&](State s) -> Pairs {
        if (auto it = memo.find(s); it != memo.end()) return it->second;
        Pairs out;
        bool any_active = s.ra > 0 || s.rb > 0 || s.rc > 0;
        if (!any_active || s.t >= horizon - 1e-12) {
            out.insert({kInf, kInf, kInf});
            memo.emplace(s, out);
            return out;
        }
        double next_grid = (std::floor(s.t / h + 1e-9) + 1) * h;
        auto run = [&](double* rem, bool spawner) {
            if (*rem <= 0) return;
            double done_at = s.t + *rem / B;
            State n = s;
            double* nrem = rem == &s.ra ? &n.ra : rem == &s.rb ? &n.rb : &n.rc;
            if (done_at <= next_grid + 1e-12) {
                n.t = done_at;
                *nrem = 0;
                if (spawner && n.rc < 0) n.rc = c;
                for (auto sub : solve(n)) {
                    std::array<double, 3> vec{done_at, sub[0], sub[1]};
                    out.insert(vec);
                }
            } else {
                *nrem -= B * (next_grid - s.t);
                n.t = next_grid;
                for (auto sub : solve(n)) out.insert(sub);
            }
        };
        run(&s.ra, true);
        run(&s.rb, false);
        run(&s.rc, false);
        if (out.empty()) out.insert({kInf, kInf, kInf});
        memo.emplace(s, out);
        return out;
    };

    std::set<std::pair<double, double>> pairs;
    for (const auto& v : solve({0, a, b, -1})) pairs.insert({v[0], v[1]});
    return pairs;
}

} // namespace lsmsim

#include "lsmsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace lsmsim {

void SimParams::validate() const {
    if (entry_size <= 0) throw std::invalid_argument("sim.entry_size must be > 0");
    if (mem_component_size <= 0) throw std::invalid_argument("sim.mem_component_size must be > 0");
    if (mem_component_count < 1) throw std::invalid_argument("sim.mem_component_count must be >= 1");
    if (bandwidth <= 0) throw std::invalid_argument("sim.bandwidth must be > 0");
    if (keyspace <= 0) throw std::invalid_argument("sim.keyspace must be > 0");
    if (dataset_size < 0) throw std::invalid_argument("sim.dataset_size must be >= 0");
    if (key_distribution == KeyDistribution::Zipf && zipf_s < 0)
        throw std::invalid_argument("sim.zipf_s must be >= 0");
}

int TreeState::total_disk_components() const {
    std::size_t n = 0;
    for (const auto& lvl : levels) n += lvl.size();
    return static_cast<int>(n);
}

const DiskComponent* TreeState::find(std::uint64_t id) const {
    for (const auto& lvl : levels)
        for (const auto& c : lvl)
            if (c.id == id) return &c;
    return nullptr;
}

DiskComponent* TreeState::find(std::uint64_t id) {
    return const_cast<DiskComponent*>(static_cast<const TreeState*>(this)->find(id));
}

void TreeState::set_merging(std::span<const std::uint64_t> ids, bool flag) {
    for (auto id : ids) {
        DiskComponent* c = find(id);
        if (!c) throw std::logic_error("set_merging: unknown component id");
        c->merging = flag;
    }
}

std::vector<DiskComponent> TreeState::take(std::span<const std::uint64_t> ids) {
    std::vector<DiskComponent> out;
    out.reserve(ids.size());
    for (auto id : ids) {
        bool found = false;
        for (auto& lvl : levels) {
            auto it = std::find_if(lvl.begin(), lvl.end(),
                                   [&](const DiskComponent& c) { return c.id == id; });
            if (it != lvl.end()) {
                out.push_back(*it);
                lvl.erase(it);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("take: unknown component id");
    }
    return out;
}

double draws_distinct(double n, double K) {
    if (K < 1) throw std::invalid_argument("draws_distinct: K must be >= 1");
    if (n < 0) throw std::invalid_argument("draws_distinct: n must be >= 0");
    if (n == 0) return 0;
    // K * (1 - (1 - 1/K)^n), via log1p/expm1 for large K
    return -K * std::expm1(n * std::log1p(-1.0 / K));
}

double union_distinct(std::span<const double> inputs, double K) {
    if (K < 1) throw std::invalid_argument("union_distinct: K must be >= 1");
    double log_miss = 0;
    for (double d : inputs) {
        if (d < 0 || d > K) throw std::invalid_argument("union_distinct: need 0 <= d_i <= K");
        if (d == K) return K;
        log_miss += std::log1p(-d / K);
    }
    return -K * std::expm1(log_miss);
}

double zipf_distinct(double n, double U, double s) {
    if (U < 1) throw std::invalid_argument("zipf_distinct: U must be >= 1");
    if (n < 0 || s < 0) throw std::invalid_argument("zipf_distinct: need n >= 0, s >= 0");
    if (s == 0) return draws_distinct(n, U);

    static std::mutex mu;
    static std::map<std::tuple<double, double, double>, double> cache;
    {
        std::lock_guard lk(mu);
        auto it = cache.find({n, U, s});
        if (it != cache.end()) return it->second;
    }

    const auto u = static_cast<std::uint64_t>(U);
    double norm = 0;
    for (std::uint64_t k = 1; k <= u; ++k) norm += std::pow(static_cast<double>(k), -s);
    double sum = 0;
    for (std::uint64_t k = 1; k <= u; ++k) {
        double p = std::pow(static_cast<double>(k), -s) / norm;
        sum += -std::expm1(n * std::log1p(-p));
    }
    std::lock_guard lk(mu);
    cache.emplace(std::tuple{n, U, s}, sum);
    return sum;
}

std::pair<std::size_t, std::size_t> overlapping_range(const Interval& query,
                                                      std::span<const DiskComponent> level_files) {
    std::size_t first = level_files.size();
    std::size_t last = level_files.size();
    for (std::size_t i = 0; i < level_files.size(); ++i) {
        if (level_files[i].interval.intersects(query)) {
            if (first == level_files.size()) first = i;
            last = i + 1;
        } else if (first != level_files.size()) {
            break; // overlapping files form a contiguous run
        }
    }
    if (first == level_files.size()) return {0, 0};
    return {first, last};
}

std::vector<DiskComponent> overlapping_files(const Interval& query,
                                             std::span<const DiskComponent> level_files) {
    auto [first, last] = overlapping_range(query, level_files);
    return {level_files.begin() + static_cast<std::ptrdiff_t>(first),
            level_files.begin() + static_cast<std::ptrdiff_t>(last)};
}

double flushed_size(const SimParams& p) {
    if (p.key_distribution == KeyDistribution::Zipf)
        return zipf_distinct(p.mem_component_size, p.keyspace, p.zipf_s);
    return draws_distinct(p.mem_component_size, p.keyspace);
}

} // namespace lsmsim

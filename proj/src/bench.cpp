#include "vcsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "vcsp/errors.hpp"

namespace vcsp {

Moments describe(std::vector<double> values) {
    Moments m;
    m.count = values.size();
    if (values.empty()) return m;
    double sum = 0.0;
    for (auto v : values) sum += v;
    m.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    m.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    if (values.size() > 1) {
        double ss = 0.0;
        for (auto v : values) ss += (v - m.mean) * (v - m.mean);
        m.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return m;
}

std::uint64_t repeat_seed(const RunConfig& config, std::size_t r) { return config.seed + r; }

RunConfig match_random_deployment(const Instance& instance, const RunConfig& config) {
    RunConfig vsc = config;
    vsc.heuristic = Heuristic::vsc;
    vsc.estimation_budget.reset();
    const auto result = search(instance, vsc);
    RunConfig matched = config;
    matched.estimation_budget = result.stats.sc_estimations;
    matched.estimation_rate =
        result.stats.ordering_candidates == 0
            ? 0.0
            : static_cast<double>(result.stats.sc_estimations) / static_cast<double>(result.stats.ordering_candidates);
    return matched;
}

std::vector<StatsRecord> run_benchmark(std::span<const BenchInstance> instances, std::span<const RunConfig> configs,
                                       std::size_t jobs) {
    struct Job {
        const BenchInstance* instance;
        RunConfig config;
        std::string label;
        std::size_t repeat;
    };
    std::vector<Job> work;
    for (const auto& inst : instances) {
        for (const auto& cfg : configs) {
            cfg.validate();
            auto effective = cfg;
            if (cfg.heuristic == Heuristic::rand_sc && !cfg.estimation_budget)
                effective = match_random_deployment(inst.instance, cfg);
            for (std::size_t r = 0; r < cfg.repeat; ++r) {
                auto run = effective;
                run.seed = repeat_seed(cfg, r);
                work.push_back({&inst, run, cfg.label(), r});
            }
        }
    }

    std::vector<StatsRecord> records(work.size());
    const auto execute = [&](std::size_t k) {
        const auto& job = work[k];
        const auto result = search(job.instance->instance, job.config);
        records[k] = {job.instance->id, job.label,          job.config.heuristic, job.config.gamma,
                      job.config.seed,  job.repeat,         result.outcome,       result.stats};
    };

    jobs = std::max<std::size_t>(1, std::min(jobs, work.size()));
    if (jobs == 1) {
        for (std::size_t k = 0; k < work.size(); ++k) execute(k);
        return records;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < work.size(); k = next++) execute(k);
            });
    }
    return records;
}

std::vector<GroupSummary> summarize(std::span<const StatsRecord> records) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const StatsRecord*>> groups;
    for (const auto& r : records) {
        auto& g = groups[r.config];
        if (g.empty()) order.push_back(r.config);
        g.push_back(&r);
    }
    std::vector<GroupSummary> out;
    for (const auto& label : order) {
        const auto& g = groups[label];
        GroupSummary s;
        s.config = label;
        s.runs = g.size();
        std::vector<double> t, h, n, b, c;
        for (const auto* r : g) {
            s.solved += r->solved();
            s.unsatisfiable += r->outcome == Outcome::unsatisfiable;
            s.timeouts += r->timed_out();
            t.push_back(r->stats.search_time);
            h.push_back(r->stats.heuristic_time);
            n.push_back(static_cast<double>(r->stats.nodes));
            b.push_back(static_cast<double>(r->stats.backtracks));
            c.push_back(static_cast<double>(r->stats.sc_estimations));
        }
        s.search_time = describe(t);
        s.heuristic_time = describe(h);
        s.nodes = describe(n);
        s.backtracks = describe(b);
        s.sc_estimations = describe(c);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

struct InstanceMeans {
    double time = 0.0;
    double backtracks = 0.0;
    double estimations = 0.0;
};

// config -> instance -> metrics averaged over repeats; config order by first appearance.
struct MeansTable {
    std::vector<std::string> configs;
    std::vector<std::string> instances;
    std::map<std::string, std::map<std::string, InstanceMeans>> means;
};

MeansTable instance_means(std::span<const StatsRecord> records) {
    MeansTable table;
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& r : records) {
        if (!table.means.count(r.config)) table.configs.push_back(r.config);
        if (std::find(table.instances.begin(), table.instances.end(), r.instance) == table.instances.end())
            table.instances.push_back(r.instance);
        auto& m = table.means[r.config][r.instance];
        m.time += r.stats.search_time;
        m.backtracks += static_cast<double>(r.stats.backtracks);
        m.estimations += static_cast<double>(r.stats.sc_estimations);
        ++counts[r.config][r.instance];
    }
    for (auto& [config, per] : table.means)
        for (auto& [inst, m] : per) {
            const auto k = static_cast<double>(counts[config][inst]);
            m.time /= k;
            m.backtracks /= k;
            m.estimations /= k;
        }
    return table;
}

struct Ratios {
    Moments time, backtracks, estimations;
};

Ratios ratios_between(const MeansTable& table, const std::string& num, const std::string& den) {
    std::vector<double> t, b, c;
    const auto& a = table.means.at(num);
    const auto& d = table.means.at(den);
    for (const auto& inst : table.instances) {
        const auto ia = a.find(inst);
        const auto id = d.find(inst);
        if (ia == a.end() || id == d.end()) continue;
        if (id->second.time > 0) t.push_back(ia->second.time / id->second.time);
        if (id->second.backtracks > 0) b.push_back(ia->second.backtracks / id->second.backtracks);
        if (id->second.estimations > 0) c.push_back(ia->second.estimations / id->second.estimations);
    }
    return {describe(t), describe(b), describe(c)};
}

}  // namespace

std::vector<RatioSummary> pairwise_ratios(std::span<const StatsRecord> records) {
    const auto table = instance_means(records);
    std::vector<RatioSummary> out;
    for (const auto& num : table.configs)
        for (const auto& den : table.configs) {
            if (num == den) continue;
            const auto r = ratios_between(table, num, den);
            out.push_back({num, den, r.time, r.backtracks, r.estimations});
        }
    return out;
}

SweepResult sweep_gamma(std::span<const BenchInstance> instances, std::span<const double> gammas,
                        const RunConfig& base, std::size_t jobs) {
    if (gammas.empty()) throw UsageError("sweep needs at least one gamma");
    std::vector<RunConfig> configs;
    RunConfig sc = base;
    sc.heuristic = Heuristic::sc;
    sc.gamma = 0.0;
    configs.push_back(sc);
    for (auto g : gammas) {
        RunConfig v = base;
        v.heuristic = Heuristic::vsc;
        v.gamma = g;
        configs.push_back(v);
    }
    SweepResult result;
    result.records = run_benchmark(instances, configs, jobs);
    const auto table = instance_means(result.records);
    const auto sc_label = sc.label();
    for (std::size_t k = 1; k < configs.size(); ++k) {
        const auto label = configs[k].label();
        const auto r = ratios_between(table, label, sc_label);
        SweepRow row{configs[k].gamma, label, r.time, r.backtracks, r.estimations, 0.0, 0.0};
        std::vector<double> t, c;
        for (const auto& [inst, m] : table.means.at(label)) {
            t.push_back(m.time);
            c.push_back(m.estimations);
        }
        row.mean_search_time = describe(t).mean;
        row.mean_estimations = describe(c).mean;
        result.rows.push_back(std::move(row));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

void write_records_csv(std::ostream& out, std::span<const StatsRecord> records) {
    out << "instance,config,heuristic,gamma,seed,repeat,outcome,solved,timed_out,search_time,heuristic_time,"
           "nodes,backtracks,constraint_checks,sc_estimations\n";
    for (const auto& r : records) {
        out << r.instance << ',' << r.config << ',' << to_string(r.heuristic) << ',' << r.gamma << ',' << r.seed
            << ',' << r.repeat << ',' << to_string(r.outcome) << ',' << (r.solved() ? 1 : 0) << ','
            << (r.timed_out() ? 1 : 0) << ',' << r.stats.search_time << ',' << r.stats.heuristic_time << ','
            << r.stats.nodes << ',' << r.stats.backtracks << ',' << r.stats.constraint_checks << ','
            << r.stats.sc_estimations << '\n';
    }
}

void write_records_jsonl(std::ostream& out, std::span<const StatsRecord> records) {
    for (const auto& r : records) {
        nlohmann::json j = {
            {"instance", r.instance},
            {"config", r.config},
            {"heuristic", to_string(r.heuristic)},
            {"gamma", r.gamma},
            {"seed", r.seed},
            {"repeat", r.repeat},
            {"outcome", to_string(r.outcome)},
            {"solved", r.solved()},
            {"timed_out", r.timed_out()},
            {"search_time", r.stats.search_time},
            {"heuristic_time", r.stats.heuristic_time},
            {"nodes", r.stats.nodes},
            {"backtracks", r.stats.backtracks},
            {"constraint_checks", r.stats.constraint_checks},
            {"sc_estimations", r.stats.sc_estimations},
        };
        out << j.dump() << '\n';
    }
}

namespace {
void moments_header(std::ostream& out, const char* name) {
    out << ',' << name << "_mean," << name << "_median," << name << "_sd";
}
void moments_row(std::ostream& out, const Moments& m) { out << ',' << m.mean << ',' << m.median << ',' << m.sd; }
}  // namespace

void write_summary_csv(std::ostream& out, std::span<const GroupSummary> groups) {
    out << "config,runs,solved,unsatisfiable,timeouts";
    for (const char* name : {"search_time", "heuristic_time", "nodes", "backtracks", "sc_estimations"})
        moments_header(out, name);
    out << '\n';
    for (const auto& g : groups) {
        out << g.config << ',' << g.runs << ',' << g.solved << ',' << g.unsatisfiable << ',' << g.timeouts;
        for (const auto* m : {&g.search_time, &g.heuristic_time, &g.nodes, &g.backtracks, &g.sc_estimations})
            moments_row(out, *m);
        out << '\n';
    }
}

void write_ratios_csv(std::ostream& out, std::span<const RatioSummary> ratios) {
    out << "numerator,denominator,instances";
    for (const char* name : {"time_ratio", "backtrack_ratio", "estimation_ratio"}) moments_header(out, name);
    out << '\n';
    for (const auto& r : ratios) {
        out << r.numerator << ',' << r.denominator << ',' << r.search_time.count;
        for (const auto* m : {&r.search_time, &r.backtracks, &r.sc_estimations}) moments_row(out, *m);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "gamma,config,instances";
    for (const char* name : {"time_ratio", "backtrack_ratio", "estimation_ratio"}) moments_header(out, name);
    out << ",mean_search_time,mean_estimations\n";
    for (const auto& r : rows) {
        out << r.gamma << ',' << r.config << ',' << r.search_time_ratio.count;
        for (const auto* m : {&r.search_time_ratio, &r.backtrack_ratio, &r.estimation_ratio}) moments_row(out, *m);
        out << ',' << r.mean_search_time << ',' << r.mean_estimations << '\n';
    }
}

}  // namespace vcsp

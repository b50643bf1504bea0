#include "repeaterlab/repeater_sim.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "repeaterlab/bell_algebra.hpp"
#include "repeaterlab/errors.hpp"
#include "repeaterlab/event_queue.hpp"

namespace rlab::sim {

namespace {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

struct LivePair {
    PairRecord rec;
    enum class Status : std::uint8_t { idle, busy, pending } status = Status::idle;
    std::shared_ptr<const LineageNode> lineage;
};

class Engine {
public:
    Engine(const ChainConfig& config, const RunOptions& options)
        : cfg_(resolved(config)), opts_(options), rng_(cfg_.rng_seed) {
        segments_ = static_cast<int>(
            std::lround(cfg_.total_length_km / cfg_.segment_length_km));
        stations_ = segments_ + 1;
        link_ = resolve_link_model(cfg_);
        purify_noise_.epsilon = cfg_.noise.on_purification ? cfg_.noise.epsilon : 0.0;
        swap_noise_.epsilon = cfg_.noise.on_swap ? cfg_.noise.epsilon : 0.0;
        free_.assign(stations_, cfg_.qubits_per_station);
        in_flight_.assign(stations_, 0);
        pending_release_.assign(stations_, 0);
        seg_attempts_.assign(segments_, 0);
        seg_ms_ = cfg_.segment_length_km / cfg_.light_speed_km_per_ms;
        // Qubits beyond the static one-per-level-per-side allocation (plus
        // the two workspace qubits) may fund buffered pairs.
        spare_.assign(stations_, 0);
        levels_ = std::countr_zero(static_cast<unsigned>(segments_));
        for (int s = 0; s < stations_; ++s) {
            int slots = 2;
            for (int k = 0; k < levels_; ++k) {
                const int size = 1 << k;
                if (s % size != 0) continue;
                if (s + size <= segments_) ++slots;
                if (s - size >= 0) ++slots;
            }
            spare_[static_cast<std::size_t>(s)] =
                std::max(0, cfg_.qubits_per_station - slots);
        }
        if (opts_.record_lineage) {
            auto node = std::make_shared<LineageNode>();
            node->kind = LineageNode::Kind::link;
            link_lineage_ = std::move(node);
        }
    }

    SimResult run(RunTrace* trace) {
        const auto nlevels = static_cast<std::size_t>(levels_) + 1;
        dbg_pumps_.assign(nlevels, 0);
        dbg_pump_ok_.assign(nlevels, 0);
        dbg_swaps_.assign(nlevels, 0);
        dbg_links_ = 0;
        for (int s = 0; s < stations_; ++s) woken_.insert(s);
        start_links(0.0);
        woken_.clear();
        while (delivered_ < cfg_.target_pairs) {
            if (queue_.empty()) throw SimDeadlockError(deadlock_message());
            const double t = queue_.top().time_ms;
            while (!queue_.empty() && queue_.top().time_ms == t)
                apply(queue_.pop(), t);
            process_deliveries(t, trace);
            if (delivered_ >= cfg_.target_pairs) break;
            process_swaps(t);
            process_purifies(t);
            start_links(t);
            if (opts_.audit_invariants) audit();
            woken_.clear();
        }
        if (std::getenv("REPEATERLAB_SPAN_STATS") != nullptr) {
            std::fprintf(stderr, "links=%lld\n", dbg_links_);
            for (std::size_t k = 0; k < nlevels; ++k)
                if (dbg_pumps_[k] || dbg_swaps_[k])
                    std::fprintf(stderr,
                                 "level %zu: pumps=%lld ok=%lld swaps=%lld\n", k,
                                 dbg_pumps_[k], dbg_pump_ok_[k], dbg_swaps_[k]);
        }
        return summarize();
    }

private:
    using SpanKey = std::pair<int, int>;

    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    bool is_complete(const LivePair& p) const {
        return p.rec.rounds_done >=
               cfg_.purification_schedule[static_cast<std::size_t>(p.rec.nesting_level)];
    }

    void index_insert(int id) {
        const LivePair& p = pairs_.at(id);
        const SpanKey key{p.rec.left_station, p.rec.right_station};
        if (is_complete(p)) {
            idle_complete_[key].insert(id);
        } else {
            idle_incomplete_[key].insert(id);
        }
    }

    void index_erase(int id) {
        const LivePair& p = pairs_.at(id);
        const SpanKey key{p.rec.left_station, p.rec.right_station};
        auto scrub = [&](auto& buckets) {
            auto it = buckets.find(key);
            if (it == buckets.end() || it->second.erase(id) == 0) return false;
            if (it->second.empty()) buckets.erase(it);
            return true;
        };
        if (!scrub(idle_complete_)) scrub(idle_incomplete_);
    }

    bool rec_complete(const PairRecord& rec) const {
        return rec.rounds_done >=
               cfg_.purification_schedule[static_cast<std::size_t>(rec.nesting_level)];
    }

    int span_ready(const SpanKey& key) const {
        const auto it = span_ready_.find(key);
        return it == span_ready_.end() ? 0 : it->second;
    }

    // Unconsumed production of a span: parked fresh pairs plus work still in
    // flight towards one (link attempts at level 0, swap products awaiting
    // their notification above). Pairs currently inside a purification round
    // are being consumed and do not count.
    int span_backlog(const SpanKey& key) const {
        int backlog = 0;
        const auto it = idle_incomplete_.find(key);
        if (it != idle_incomplete_.end())
            backlog += static_cast<int>(it->second.size());
        if (key.second - key.first == 1) {
            backlog += seg_attempts_[static_cast<std::size_t>(key.first)];
        } else {
            const auto pend = span_pending_.find(key);
            if (pend != span_pending_.end()) backlog += pend->second;
        }
        return backlog;
    }

    // All pairs of a span plus in-flight link attempts, pump pairs included.
    int span_stock(const SpanKey& key) const {
        const auto it = span_count_.find(key);
        int stock = it == span_count_.end() ? 0 : it->second;
        if (key.second - key.first == 1)
            stock += seg_attempts_[static_cast<std::size_t>(key.first)];
        return stock;
    }

    // A span may buffer extra pairs only if both end stations hold qubits
    // beyond the one-pair-per-level static allocation that the minimum
    // 2 + 2 log2(n) budget provides. A pipelined span parks up to two extra
    // pairs per end, and a station serves spans on both sides, so it takes
    // four spares before buffering is safe; with less, a buffered pair sits
    // on a qubit some other level needs and the chain wedges.
    bool funded(const SpanKey& key) const {
        return spare_[static_cast<std::size_t>(key.first)] >= 4 &&
               spare_[static_cast<std::size_t>(key.second)] >= 4;
    }

    // Production gate. Funded segments pipeline: link attempts are cheap, so
    // they keep a deep intake feeding up to three pump chains and a
    // three-pair output buffer that rides out neighbour jitter. Funded merged
    // spans keep at most one incoming pair and two finished ones; any more
    // parks qubits that the levels below need to keep producing. Unfunded
    // spans fall back to strict demand-driven production: one resident plus
    // one incoming pair, paused entirely while a finished pair waits.
    bool may_produce(const SpanKey& key) const {
        if (funded(key)) {
            const bool segment = key.second - key.first == 1;
            return span_backlog(key) < (segment ? 10 : 2) &&
                   span_ready(key) < (segment ? 3 : 2);
        }
        return span_stock(key) < 2 && span_ready(key) == 0;
    }

    // Drops the span stock and wakes the stations that may now act: freed
    // qubits feed link attempts and freed buffer room feeds pumps and swaps
    // anywhere underneath the span.
    void note_destroyed(int id, const PairRecord& rec) {
        const SpanKey key{rec.left_station, rec.right_station};
        auto it = span_count_.find(key);
        if (it != span_count_.end() && --it->second == 0) span_count_.erase(it);
        if (rec_complete(rec)) {
            auto ready = span_ready_.find(key);
            if (ready != span_ready_.end() && --ready->second == 0)
                span_ready_.erase(ready);
        } else {
            auto inc = span_incomplete_.find(key);
            if (inc != span_incomplete_.end() && inc->second.erase(id) != 0 &&
                inc->second.empty())
                span_incomplete_.erase(inc);
        }
        for (int s = rec.left_station; s <= rec.right_station; ++s)
            woken_.insert(s);
    }

    void note_created(int id, const PairRecord& rec) {
        const SpanKey key{rec.left_station, rec.right_station};
        ++span_count_[key];
        if (rec_complete(rec)) {
            ++span_ready_[key];
        } else {
            span_incomplete_[key].insert(id);
        }
    }

    void note_completed(int id, const PairRecord& rec) {
        const SpanKey key{rec.left_station, rec.right_station};
        ++span_ready_[key];
        auto inc = span_incomplete_.find(key);
        if (inc != span_incomplete_.end() && inc->second.erase(id) != 0 &&
            inc->second.empty())
            span_incomplete_.erase(inc);
    }

    int create_link_pair(int left, int right, double t) {
        const int id = next_id_++;
        LivePair p;
        p.rec = PairRecord{left, right, link_.state, 0, 0, t};
        p.lineage = link_lineage_;
        note_created(id, p.rec);
        pairs_.emplace(id, std::move(p));
        index_insert(id);
        return id;
    }

    void apply(const SimEvent& ev, double t) {
        switch (ev.type) {
            case SimEvent::Type::link_resolved: {
                const int a = ev.segment;
                const int b = ev.segment + 1;
                --seg_attempts_[static_cast<std::size_t>(ev.segment)];
                --in_flight_[a];
                --in_flight_[b];
                if (uniform01() < link_.success_prob) {
                    ++dbg_links_;
                    create_link_pair(a, b, t);
                } else {
                    ++free_[a];
                    ++free_[b];
                }
                woken_.insert(a);
                woken_.insert(b);
                break;
            }
            case SimEvent::Type::purify_resolved: {
                LivePair& kept = pairs_.at(ev.pair_a);
                LivePair& sacr = pairs_.at(ev.pair_b);
                const SpanKey key{kept.rec.left_station, kept.rec.right_station};
                const bool nascent = kept.rec.rounds_done == 0;
                const auto res =
                    bell::purify(kept.rec.state, sacr.rec.state, purify_noise_);
                ++dbg_pumps_[static_cast<std::size_t>(kept.rec.nesting_level)];
                if (uniform01() < res.success_prob) {
                    ++dbg_pump_ok_[static_cast<std::size_t>(kept.rec.nesting_level)];
                    kept.rec.state = *res.state;
                    ++kept.rec.rounds_done;
                    if (rec_complete(kept.rec)) {
                        note_completed(ev.pair_a, kept.rec);
                        drop_chain(key);
                    }
                    if (opts_.record_lineage) {
                        auto node = std::make_shared<LineageNode>();
                        node->kind = LineageNode::Kind::purify;
                        node->a = kept.lineage;
                        node->b = sacr.lineage;
                        kept.lineage = std::move(node);
                    }
                } else if (nascent) {
                    drop_chain(key);
                }
                const int l = kept.rec.left_station;
                const int r = kept.rec.right_station;
                note_destroyed(ev.pair_b, sacr.rec);
                pairs_.erase(ev.pair_b);
                ++free_[l];
                ++free_[r];
                kept.status = LivePair::Status::idle;
                index_insert(ev.pair_a);
                woken_.insert(l);
                woken_.insert(r);
                break;
            }
            case SimEvent::Type::swap_usable: {
                LivePair& merged = pairs_.at(ev.pair_a);
                merged.status = LivePair::Status::idle;
                index_insert(ev.pair_a);
                const int l = merged.rec.left_station;
                const int r = merged.rec.right_station;
                const int mid = (l + r) / 2;
                auto pend = span_pending_.find(SpanKey{l, r});
                if (pend != span_pending_.end() && --pend->second == 0)
                    span_pending_.erase(pend);
                pending_release_[mid] -= 2;
                free_[mid] += 2;
                woken_.insert(l);
                woken_.insert(mid);
                woken_.insert(r);
                break;
            }
        }
    }

    void process_deliveries(double t, RunTrace* trace) {
        const SpanKey key{0, segments_};
        auto it = idle_complete_.find(key);
        if (it == idle_complete_.end()) return;
        while (!it->second.empty() && delivered_ < cfg_.target_pairs) {
            const int id = *it->second.begin();
            it->second.erase(it->second.begin());
            const LivePair& p = pairs_.at(id);
            arrivals_.push_back(t);
            fidelities_.push_back(p.rec.state.fidelity());
            if (trace != nullptr)
                trace->delivered.push_back(DeliveredPair{t, p.rec.state, p.lineage});
            note_destroyed(id, p.rec);
            pairs_.erase(id);
            ++free_[0];
            ++free_[segments_];
            ++delivered_;
        }
        if (it->second.empty()) idle_complete_.erase(it);
    }

    // Station j may swap only at its native level countr_zero(j); that is the
    // unique level at which j is interior to a merged span of the nesting.
    // Swapping drops the parent spans' stock, which can unblock a swap at a
    // station already passed, so iterate to a fixpoint.
    void process_swaps(double t) {
        bool progress = true;
        while (progress) {
            progress = false;
            const std::set<int> snapshot = woken_;
            for (int j : snapshot) progress |= try_swaps_at(j, t);
        }
    }

    bool try_swaps_at(int j, double t) {
        if (j <= 0 || j >= segments_) return false;
        const int half = 1 << std::countr_zero(static_cast<unsigned>(j));
        const SpanKey left_key{j - half, j};
        const SpanKey right_key{j, j + half};
        const SpanKey merged_key{j - half, j + half};
        bool any = false;
        while (may_produce(merged_key)) {
            auto il = idle_complete_.find(left_key);
            auto ir = idle_complete_.find(right_key);
            if (il == idle_complete_.end() || ir == idle_complete_.end()) break;
            start_swap(j, *il->second.begin(), *ir->second.begin(), t);
            any = true;
        }
        return any;
    }

    void start_swap(int j, int left_id, int right_id, double t) {
        index_erase(left_id);
        index_erase(right_id);
        const LivePair& a = pairs_.at(left_id);
        const LivePair& b = pairs_.at(right_id);
        const int l = a.rec.left_station;
        const int r = b.rec.right_station;
        LivePair m;
        m.rec.left_station = l;
        m.rec.right_station = r;
        m.rec.state = bell::swap_keep_target(a.rec.state, b.rec.state, swap_noise_);
        m.rec.nesting_level = a.rec.nesting_level + 1;
        ++dbg_swaps_[static_cast<std::size_t>(m.rec.nesting_level)];
        m.status = LivePair::Status::pending;
        if (opts_.record_lineage) {
            auto node = std::make_shared<LineageNode>();
            node->kind = LineageNode::Kind::swap;
            node->a = a.lineage;
            node->b = b.lineage;
            m.lineage = std::move(node);
        }
        const double usable = t + static_cast<double>(r - l) * seg_ms_ / 2.0;
        m.rec.created_at_ms = usable;
        const int id = next_id_++;
        note_destroyed(left_id, a.rec);
        note_destroyed(right_id, b.rec);
        note_created(id, m.rec);
        ++span_pending_[SpanKey{l, r}];
        pairs_.emplace(id, std::move(m));
        pairs_.erase(left_id);
        pairs_.erase(right_id);
        pending_release_[j] += 2;
        SimEvent ev;
        ev.time_ms = usable;
        ev.type = SimEvent::Type::swap_usable;
        ev.pair_a = id;
        queue_.push(ev);
    }

    // Pumping runs in chains: a chain head absorbs fresh (round-zero) pairs
    // one round at a time until its scheduled rounds complete. Every head
    // follows the identical absorb-fresh state sequence, so the number of
    // concurrent chains changes throughput but not the delivered state.
    // Fresh pairs never pump each other while a head could take them, heads
    // never pump heads, and pumping pauses while the finished-pair buffer is
    // full.
    void process_purifies(double t) {
        std::vector<SpanKey> keys;
        keys.reserve(span_incomplete_.size());
        for (const auto& [key, ids] : span_incomplete_) keys.push_back(key);
        for (const SpanKey& key : keys) {
            const bool segment = key.second - key.first == 1;
            const bool piped = segment && funded(key);
            const int ready_cap = piped ? 3 : 2;
            const int chain_cap = piped ? 3 : 1;
            while (span_ready(key) < ready_cap) {
                const auto it = idle_incomplete_.find(key);
                if (it == idle_incomplete_.end()) break;
                int head = -1;
                int fresh = -1;
                int fresh2 = -1;
                for (int id : it->second) {
                    if (pairs_.at(id).rec.rounds_done > 0) {
                        if (head < 0) head = id;
                    } else if (fresh < 0) {
                        fresh = id;
                    } else if (fresh2 < 0) {
                        fresh2 = id;
                    }
                }
                if (head >= 0 && fresh >= 0) {
                    start_purify(key, head, fresh, t);
                } else if (fresh2 >= 0 && span_chains(key) < chain_cap) {
                    ++span_chains_[key];
                    start_purify(key, fresh, fresh2, t);
                } else {
                    break;
                }
            }
        }
    }

    int span_chains(const SpanKey& key) const {
        const auto it = span_chains_.find(key);
        return it == span_chains_.end() ? 0 : it->second;
    }

    void drop_chain(const SpanKey& key) {
        auto it = span_chains_.find(key);
        if (it != span_chains_.end() && --it->second == 0) span_chains_.erase(it);
    }

    void start_purify(const SpanKey& key, int kept, int sacr, double t) {
        index_erase(kept);
        index_erase(sacr);
        pairs_.at(kept).status = LivePair::Status::busy;
        pairs_.at(sacr).status = LivePair::Status::busy;
        SimEvent ev;
        ev.time_ms = t + 2.0 * static_cast<double>(key.second - key.first) * seg_ms_;
        ev.type = SimEvent::Type::purify_resolved;
        ev.pair_a = kept;
        ev.pair_b = sacr;
        queue_.push(ev);
    }

    void start_links(double t) {
        std::set<int> segs;
        for (int s : woken_) {
            if (s > 0) segs.insert(s - 1);
            if (s < segments_) segs.insert(s);
        }
        bool started = true;
        while (started) {
            started = false;
            for (int seg : segs) {
                if (free_[seg] > 0 && free_[seg + 1] > 0 &&
                    may_produce(SpanKey{seg, seg + 1})) {
                    --free_[seg];
                    --free_[seg + 1];
                    ++in_flight_[seg];
                    ++in_flight_[seg + 1];
                    ++seg_attempts_[static_cast<std::size_t>(seg)];
                    SimEvent ev;
                    ev.time_ms = t + 2.0 * seg_ms_;
                    ev.type = SimEvent::Type::link_resolved;
                    ev.segment = seg;
                    queue_.push(ev);
                    started = true;
                }
            }
        }
    }

    void audit() const {
        std::vector<int> held(static_cast<std::size_t>(stations_), 0);
        for (const auto& [id, p] : pairs_) {
            ++held[static_cast<std::size_t>(p.rec.left_station)];
            ++held[static_cast<std::size_t>(p.rec.right_station)];
        }
        for (int s = 0; s < stations_; ++s) {
            const auto i = static_cast<std::size_t>(s);
            if (free_[i] + in_flight_[i] + pending_release_[i] + held[i] !=
                cfg_.qubits_per_station)
                throw NumericalError("qubit conservation violated at station " +
                                     std::to_string(s));
        }
    }

    std::string deadlock_message() const {
        int idle = 0, busy = 0, pending = 0;
        std::map<SpanKey, std::pair<int, int>> spans;  // incomplete, complete
        for (const auto& [id, p] : pairs_) {
            switch (p.status) {
                case LivePair::Status::idle: ++idle; break;
                case LivePair::Status::busy: ++busy; break;
                case LivePair::Status::pending: ++pending; break;
            }
            auto& [inc, comp] = spans[{p.rec.left_station, p.rec.right_station}];
            ++(is_complete(p) ? comp : inc);
        }
        std::string detail;
        for (const auto& [key, counts] : spans)
            detail += " (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + "):" +
                      std::to_string(counts.first) + "+" +
                      std::to_string(counts.second) + "c";
        detail += "; free:";
        for (int f : free_) detail += " " + std::to_string(f);
        return "event queue ran dry after " + std::to_string(delivered_) + " of " +
               std::to_string(cfg_.target_pairs) + " deliveries (pairs idle=" +
               std::to_string(idle) + " busy=" + std::to_string(busy) +
               " pending=" + std::to_string(pending) +
               "); the qubit budget or schedule cannot complete the protocol; "
               "span stock:" +
               detail;
    }

    SimResult summarize() const {
        SimResult res;
        res.arrival_times_ms = arrivals_;
        res.config = cfg_;
        res.seed = cfg_.rng_seed;
        if (arrivals_.size() >= 2) {
            std::vector<double> diffs(arrivals_.size() - 1);
            for (std::size_t i = 0; i + 1 < arrivals_.size(); ++i)
                diffs[i] = arrivals_[i + 1] - arrivals_[i];
            res.mean_interarrival_ms = mean_of(diffs);
            res.std_interarrival_ms = population_std(diffs);
            if (res.mean_interarrival_ms > 0.0)
                res.rate_hz = 1000.0 / res.mean_interarrival_ms;
        }
        res.mean_final_fidelity = mean_of(fidelities_);
        res.std_final_fidelity = population_std(fidelities_);
        return res;
    }

    ChainConfig cfg_;
    RunOptions opts_;
    std::mt19937_64 rng_;
    int segments_ = 0;
    int stations_ = 0;
    int levels_ = 0;
    LinkModel link_;
    bell::GateNoise purify_noise_;
    bell::GateNoise swap_noise_;
    double seg_ms_ = 0.0;

    EventQueue queue_;
    std::map<int, LivePair> pairs_;
    int next_id_ = 0;
    std::map<SpanKey, std::set<int>> idle_incomplete_;
    std::map<SpanKey, std::set<int>> idle_complete_;
    std::map<SpanKey, int> span_count_;
    std::map<SpanKey, int> span_ready_;
    std::map<SpanKey, int> span_pending_;
    std::map<SpanKey, std::set<int>> span_incomplete_;
    std::map<SpanKey, int> span_chains_;
    std::set<int> woken_;
    std::vector<int> spare_;
    std::vector<int> free_;
    std::vector<int> in_flight_;
    std::vector<int> pending_release_;
    std::vector<int> seg_attempts_;
    std::shared_ptr<const LineageNode> link_lineage_;

    std::vector<long long> dbg_pumps_, dbg_pump_ok_, dbg_swaps_;
    long long dbg_links_ = 0;

    int delivered_ = 0;
    std::vector<double> arrivals_;
    std::vector<double> fidelities_;
};

}  // namespace

SimResult run(const ChainConfig& config) { return run(config, RunOptions{}, nullptr); }

SimResult run(const ChainConfig& config, const RunOptions& options, RunTrace* trace) {
    Engine engine(config, options);
    return engine.run(trace);
}

std::vector<SimResult> sweep_epsilon(const ChainConfig& config,
                                     const std::vector<double>& epsilons,
                                     int runs_per_point) {
    if (epsilons.empty()) throw ValidationError("epsilons must not be empty");
    if (runs_per_point < 1) throw ValidationError("runs_per_point must be >= 1");
    for (double e : epsilons)
        if (!(e >= 0.0 && e < 1.0))
            throw ValidationError("epsilon values must lie in [0, 1)");

    std::vector<SimResult> out;
    out.reserve(epsilons.size());
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        std::vector<SimResult> runs;
        runs.reserve(static_cast<std::size_t>(runs_per_point));
        for (int j = 0; j < runs_per_point; ++j) {
            ChainConfig point = config;
            point.noise.epsilon = epsilons[i];
            point.rng_seed = config.rng_seed +
                             i * static_cast<std::uint64_t>(runs_per_point) +
                             static_cast<std::uint64_t>(j);
            runs.push_back(run(point));
        }
        if (runs_per_point == 1) {
            out.push_back(std::move(runs.front()));
            continue;
        }
        SimResult agg;
        agg.config = runs.front().config;
        agg.seed = runs.front().seed;
        std::vector<double> rates, interarrivals, fidelities;
        for (const SimResult& r : runs) {
            rates.push_back(r.rate_hz);
            interarrivals.push_back(r.mean_interarrival_ms);
            fidelities.push_back(r.mean_final_fidelity);
        }
        agg.rate_hz = mean_of(rates);
        agg.mean_interarrival_ms = mean_of(interarrivals);
        agg.std_interarrival_ms = population_std(interarrivals);
        agg.mean_final_fidelity = mean_of(fidelities);
        agg.std_final_fidelity = population_std(fidelities);
        out.push_back(std::move(agg));
    }
    return out;
}

bell::BellDiagonalState replay_lineage(const LineageNode& node, const LinkModel& link,
                                       const NoiseConfig& noise) {
    switch (node.kind) {
        case LineageNode::Kind::link:
            return link.state;
        case LineageNode::Kind::purify: {
            if (!node.a || !node.b)
                throw ValidationError("purify lineage node needs two children");
            const bell::GateNoise g{noise.on_purification ? noise.epsilon : 0.0};
            const auto a = replay_lineage(*node.a, link, noise);
            const auto b = replay_lineage(*node.b, link, noise);
            const auto res = bell::purify(a, b, g);
            if (!res.state)
                throw NumericalError("lineage replay reached a zero-probability branch");
            return *res.state;
        }
        case LineageNode::Kind::swap: {
            if (!node.a || !node.b)
                throw ValidationError("swap lineage node needs two children");
            const bell::GateNoise g{noise.on_swap ? noise.epsilon : 0.0};
            return bell::swap_keep_target(replay_lineage(*node.a, link, noise),
                                          replay_lineage(*node.b, link, noise), g);
        }
    }
    throw ValidationError("unknown lineage node kind");
}

}  // namespace rlab::sim

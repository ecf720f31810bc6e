#include "cmlsim/sim.hpp"

#include "cmlsim/rng.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace cmlsim::sim {

namespace {

constexpr int kFitMaxEpochs = 50;

std::runtime_error invalid(const std::string& field) {
    return std::runtime_error("config invalid: " + field);
}

double fit_and_replay(const data::DatasetSplit& parts, const ScenarioConfig& config) {
    SparsePerceptron model =
        fit_initial(parts.initial_train, config.num_words, kFitMaxEpochs, config.seed);
    for (const LabeledSample& sample : parts.submission_pool) {
        model.train_one(sample);
    }
    return evaluate(model, parts.test);
}

} // namespace

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig config;
    config.agents = {
        {
            .id = "good",
            .honest = true,
            .start_balance = 10000 * kUnitsPerToken,
            .mean_deposit = 50 * kUnitsPerToken,
            .stdev_deposit = 10 * kUnitsPerToken,
            .mean_update_wait = 10 * 60,
            .prob_mistake = 0.0001,
        },
        {
            .id = "malicious",
            .honest = false,
            .start_balance = 10000 * kUnitsPerToken,
            .mean_deposit = 100 * kUnitsPerToken,
            .stdev_deposit = 3 * kUnitsPerToken,
            .mean_update_wait = 1 * 60 * 60,
            .prob_mistake = 0.0,
            .corruption_mode = agents::CorruptionMode::label_flip,
        },
    };
    return config;
}

void ScenarioConfig::validate() const {
    if (num_words < 1) throw invalid("num_words");
    if (!(train_size > 0.0 && train_size < 1.0)) throw invalid("train_size");
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw invalid("test_fraction");
    if (snapshot_every <= 0) throw invalid("snapshot_every");
    if (max_virtual_time < 0) throw invalid("max_virtual_time");
    contract.validate();
    if (agents.empty()) throw invalid("agents");
    std::set<AgentId> ids;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& a = agents[i];
        const std::string prefix = "agents[" + std::to_string(i) + "].";
        if (a.id.empty() || !ids.insert(a.id).second) throw invalid(prefix + "id");
        if (a.start_balance < 0) throw invalid(prefix + "start_balance");
        if (a.mean_deposit <= 0) throw invalid(prefix + "mean_deposit");
        if (a.stdev_deposit < 0) throw invalid(prefix + "stdev_deposit");
        if (a.mean_update_wait <= 0) throw invalid(prefix + "mean_update_wait_s");
        if (a.prob_mistake < 0.0 || a.prob_mistake > 1.0) throw invalid(prefix + "prob_mistake");
    }
    switch (dataset.kind) {
        case DatasetSpec::Kind::synthetic:
            if (dataset.n < 2) throw invalid("dataset_n");
            break;
        case DatasetSpec::Kind::indexed:
        case DatasetSpec::Kind::raw_text:
            if (dataset.path.empty()) throw invalid("dataset_path");
            break;
    }
}

data::DatasetSplit prepare_dataset(const ScenarioConfig& config) {
    const std::uint64_t dataset_seed = config.dataset.seed.value_or(config.seed);
    std::vector<LabeledSample> all;
    data::Vocabulary vocab;
    switch (config.dataset.kind) {
        case DatasetSpec::Kind::synthetic:
            all = data::synthesize(config.dataset.n, config.num_words, dataset_seed);
            break;
        case DatasetSpec::Kind::indexed:
            all = data::load_indexed(config.dataset.path, config.num_words);
            break;
        case DatasetSpec::Kind::raw_text:
            all = data::load_raw_text(config.dataset.path, config.num_words, &vocab);
            break;
    }

    if (!config.dataset.test_path.empty()) {
        // Separate held-out file: test_fraction is ignored.
        std::vector<LabeledSample> test;
        if (config.dataset.kind == DatasetSpec::Kind::raw_text) {
            test = data::load_raw_text_with(config.dataset.test_path, vocab);
        } else {
            test = data::load_indexed(config.dataset.test_path, config.num_words);
        }
        data::DatasetSplit parts =
            data::split(std::move(all), config.train_size, 0.0, config.seed);
        parts.test = std::move(test);
        return parts;
    }
    return data::split(std::move(all), config.train_size, config.test_fraction, config.seed);
}

SimulationReport run(const ScenarioConfig& config) {
    config.validate();
    const data::DatasetSplit parts = prepare_dataset(config);
    if (parts.test.empty()) {
        throw invalid("test_fraction");
    }

    SparsePerceptron model =
        fit_initial(parts.initial_train, config.num_words, kFitMaxEpochs, config.seed);

    contract::Contract market(config.contract);

    struct AgentState {
        agents::AgentProfile profile;
        RngStream rng;
        bool submission_scheduled = false;
    };
    std::vector<AgentState> states;
    states.reserve(config.agents.size());
    for (const agents::AgentProfile& profile : config.agents) {
        market.register_agent(profile.id, profile.start_balance);
        states.push_back({profile, RngStream(config.seed, "agent/" + profile.id), false});
    }

    // Claims settle before submissions at equal times; remaining ties break
    // by agent id then scheduling order, keeping the event order total.
    enum EventKind : int { kClaim = 0, kSubmission = 1 };
    struct Event {
        Seconds t = 0;
        int kind = kSubmission;
        std::size_t agent = 0;
        std::uint64_t seq = 0;
        SubmissionId submission = 0;
    };
    auto later = [&states](const Event& a, const Event& b) {
        if (a.t != b.t) return a.t > b.t;
        if (a.kind != b.kind) return a.kind > b.kind;
        const AgentId& ia = states[a.agent].profile.id;
        const AgentId& ib = states[b.agent].profile.id;
        if (ia != ib) return ia > ib;
        return a.seq > b.seq;
    };
    std::priority_queue<Event, std::vector<Event>, decltype(later)> queue(later);

    std::uint64_t next_seq = 0;
    auto schedule_submission = [&](std::size_t idx, Seconds t) {
        queue.push({t, kSubmission, idx, next_seq++, 0});
        states[idx].submission_scheduled = true;
    };
    for (std::size_t i = 0; i < states.size(); ++i) {
        schedule_submission(i, agents::draw_wait(states[i].profile, states[i].rng));
    }

    SimulationReport report;
    for (const AgentState& st : states) {
        report.agent_order.push_back(st.profile.id);
        report.drained_at[st.profile.id] = std::nullopt;
        if (!st.profile.honest) {
            report.malicious_agents.push_back(st.profile.id);
        }
    }

    auto take_snapshot = [&](Seconds t) {
        Snapshot snap;
        snap.t = t;
        snap.accuracy = evaluate(model, parts.test);
        for (const AgentState& st : states) {
            snap.balances[st.profile.id] =
                market.free_balance_of(st.profile.id) + market.escrow_of(st.profile.id);
        }
        snap.pool = market.ledger().reward_pool;
        snap.burned = market.ledger().burned;
        report.snapshots.push_back(std::move(snap));
    };
    take_snapshot(0);
    Seconds next_snapshot = config.snapshot_every;

    // An agent is only worth waking while it could ever fund a submission.
    auto min_viable_deposit = [&](const AgentId& id) {
        return std::max(market.required_deposit(id), config.contract.submission_cost + 1);
    };

    std::size_t pool_cursor = 0;
    Seconds now = 0;
    while (!queue.empty()) {
        const Event ev = queue.top();
        if (config.max_virtual_time > 0 && ev.t > config.max_virtual_time) {
            break;
        }
        queue.pop();
        while (next_snapshot < ev.t) {
            take_snapshot(next_snapshot);
            next_snapshot += config.snapshot_every;
        }
        now = ev.t;
        AgentState& st = states[ev.agent];
        const AgentId& id = st.profile.id;

        if (ev.kind == kClaim) {
            const contract::PendingSubmission* sub = market.pending(ev.submission);
            const Label prediction = model.predict(sub->sample.features);
            market.claim(id, ev.submission, now, prediction);
            // A refund may re-fund an idle agent.
            const bool wants_more =
                !st.profile.honest || pool_cursor < parts.submission_pool.size();
            if (!st.submission_scheduled && wants_more &&
                market.free_balance_of(id) >= min_viable_deposit(id)) {
                schedule_submission(ev.agent, now + agents::draw_wait(st.profile, st.rng));
            }
        } else {
            st.submission_scheduled = false;
            LabeledSample sample;
            bool have_sample = true;
            if (st.profile.honest) {
                if (pool_cursor >= parts.submission_pool.size()) {
                    have_sample = false; // allotment exhausted, agent is done
                } else {
                    sample = agents::good_transform(parts.submission_pool[pool_cursor],
                                                    st.profile.prob_mistake, st.rng);
                }
            } else {
                const std::size_t pick =
                    static_cast<std::size_t>(st.rng.uniform_below(parts.submission_pool.size()));
                sample = agents::corrupt(parts.submission_pool[pick],
                                         st.profile.corruption_mode, config.num_words, st.rng);
            }

            if (have_sample) {
                const Currency required = market.required_deposit(id);
                const Currency drawn =
                    agents::draw_deposit(st.profile, config.contract.submission_cost, st.rng);
                Currency offered = std::max(drawn, required);
                const Currency free = market.free_balance_of(id);
                if (free < offered + required) {
                    // Anything left below the next round's minimum is dead
                    // capital, so the stake swallows the whole balance.
                    offered = free;
                }
                const contract::SubmitResult result = market.submit(id, sample, offered, now);
                if (result.ok()) {
                    if (st.profile.honest) {
                        ++pool_cursor;
                    }
                    model.train_one(sample);
                    queue.push({market.pending(result.id)->claimable_at, kClaim, ev.agent,
                                next_seq++, result.id});
                    schedule_submission(ev.agent, now + agents::draw_wait(st.profile, st.rng));
                } else if (market.free_balance_of(id) >= min_viable_deposit(id) ||
                           market.escrow_of(id) > 0) {
                    schedule_submission(ev.agent, now + agents::draw_wait(st.profile, st.rng));
                }
                // else: retired; a later refund re-awakens it via the claim path
            }
        }

        ++report.events_processed;
        auto& drained = report.drained_at[id];
        if (!drained && market.free_balance_of(id) + market.escrow_of(id) == 0) {
            drained = now;
        }
    }

    while (next_snapshot <= now) {
        take_snapshot(next_snapshot);
        next_snapshot += config.snapshot_every;
    }
    if (report.snapshots.back().t != now) {
        take_snapshot(now);
    }

    report.final_accuracy = evaluate(model, parts.test);
    report.accuracy_all = fit_and_replay(parts, config);
    report.gap = compute_gap(report.accuracy_all, report.final_accuracy);
    return report;
}

double baseline_accuracy(const ScenarioConfig& config) {
    config.validate();
    const data::DatasetSplit parts = prepare_dataset(config);
    if (parts.test.empty()) {
        throw invalid("test_fraction");
    }
    return fit_and_replay(parts, config);
}

double compute_gap(double accuracy_all, double accuracy) {
    if (!(accuracy_all >= 0.0 && accuracy_all <= 100.0) ||
        !(accuracy >= 0.0 && accuracy <= 100.0)) {
        throw std::domain_error("accuracy out of range");
    }
    return accuracy_all - accuracy;
}

std::optional<double> time_to_drain(const SimulationReport& report, const AgentId& agent) {
    auto it = report.drained_at.find(agent);
    if (it == report.drained_at.end()) {
        throw std::runtime_error("unknown agent");
    }
    if (!it->second) {
        return std::nullopt;
    }
    return static_cast<double>(*it->second) / static_cast<double>(kSecondsPerDay);
}

} // namespace cmlsim::sim

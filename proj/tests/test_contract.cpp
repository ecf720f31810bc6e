#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlsim/contract.hpp"
#include "cmlsim/rng.hpp"

#include <string>

using namespace cmlsim;
using namespace cmlsim::contract;

namespace {

ContractRules instant_rules() {
    // no waits, so claims can follow submissions in the same tick
    ContractRules rules;
    rules.submission_cost = 5;
    rules.refund_wait = 0;
    rules.base_min_deposit = 50;
    rules.base_cooldown = 0;
    return rules;
}

const LabeledSample kSample{{1, 2}, 1};

// Runs `count` submit+claim rounds that all fail verification.
void record_failures(Contract& market, const AgentId& agent, int count, Seconds& now) {
    for (int i = 0; i < count; ++i) {
        const auto result = market.submit(agent, kSample, market.required_deposit(agent), now);
        REQUIRE(result.ok());
        market.claim(agent, result.id, now, kSample.label ^ 1);
        ++now;
    }
}

void record_successes(Contract& market, const AgentId& agent, int count, Seconds& now) {
    for (int i = 0; i < count; ++i) {
        const auto result = market.submit(agent, kSample, market.required_deposit(agent), now);
        REQUIRE(result.ok());
        market.claim(agent, result.id, now, kSample.label);
        ++now;
    }
}

} // namespace

TEST_CASE("required_deposit: no history pays the base minimum") {
    Contract market(instant_rules());
    market.register_agent("a", 10000);
    CHECK(market.required_deposit("a") == 50);
}

TEST_CASE("required_deposit: all-failed window doubles the stake") {
    Contract market(instant_rules());
    market.register_agent("a", 100000);
    Seconds now = 0;
    record_failures(market, "a", 10, now);
    CHECK(market.required_deposit("a") == 100);
}

TEST_CASE("required_deposit: 4 failures in a window of 10 keeps good standing") {
    Contract market(instant_rules());
    market.register_agent("a", 100000);
    Seconds now = 0;
    record_successes(market, "a", 6, now);
    record_failures(market, "a", 4, now);
    CHECK(market.required_deposit("a") == 50);
}

TEST_CASE("required_deposit/cooldown reject unknown agents") {
    Contract market(instant_rules());
    CHECK_THROWS_WITH(market.required_deposit("ghost"), "unregistered agent");
    CHECK_THROWS_WITH(market.required_cooldown("ghost"), "unregistered agent");
}

TEST_CASE("required_cooldown: base, escalated, and at-threshold boundary") {
    ContractRules rules = instant_rules();
    rules.base_cooldown = 600;
    Contract market(rules);
    market.register_agent("a", 1000000);
    CHECK(market.required_cooldown("a") == 600);

    // cooldown 600 never blocks here: each round advances time by 600+
    Seconds now = 0;
    for (int i = 0; i < 5; ++i) {
        const auto result = market.submit("a", kSample, market.required_deposit("a"), now);
        REQUIRE(result.ok());
        market.claim("a", result.id, now, kSample.label);
        now += 600;
    }
    for (int i = 0; i < 5; ++i) {
        const auto result = market.submit("a", kSample, market.required_deposit("a"), now);
        REQUIRE(result.ok());
        market.claim("a", result.id, now, kSample.label ^ 1);
        now += market.required_cooldown("a");
    }
    // 5 of 10 failed: at the threshold is escalated by definition
    CHECK(market.required_cooldown("a") == 3600);
    CHECK(market.required_deposit("a") == 100);
}

TEST_CASE("standing window evicts the oldest outcomes first") {
    Contract market(instant_rules());
    market.register_agent("a", 10000000);
    Seconds now = 0;
    record_failures(market, "a", 10, now);
    CHECK(market.required_deposit("a") == 100);
    // ten fresh successes push every failure out of the window
    record_successes(market, "a", 10, now);
    CHECK(market.required_deposit("a") == 50);
}

TEST_CASE("submit splits the deposit into burn and escrow") {
    Contract market(instant_rules());
    market.register_agent("a", 10000);
    const auto result = market.submit("a", kSample, 55, 100);
    REQUIRE(result.ok());
    CHECK(market.free_balance_of("a") == 9945);
    CHECK(market.ledger().burned == 5);
    CHECK(market.ledger().escrow.at(result.id) == 50);
    CHECK(market.escrow_of("a") == 50);
    const PendingSubmission* pending = market.pending(result.id);
    REQUIRE(pending != nullptr);
    CHECK(pending->claimable_at == 100);
    CHECK(pending->stake == 50);
}

TEST_CASE("submit rejections leave the ledger bit-identical") {
    ContractRules rules = instant_rules();
    rules.base_cooldown = 600;
    Contract market(rules);
    market.register_agent("a", 3);
    market.register_agent("b", 10000);
    const std::string before = market.to_json().dump();

    SUBCASE("insufficient balance") {
        const auto result = market.submit("a", kSample, 55, 0);
        CHECK(result.error == SubmitError::insufficient_balance);
        CHECK(describe(result.error) == std::string("insufficient balance"));
    }
    SUBCASE("deposit below required minimum") {
        const auto result = market.submit("b", kSample, 49, 0);
        CHECK(result.error == SubmitError::below_required_deposit);
        CHECK(describe(result.error) == std::string("deposit below required minimum"));
    }
    SUBCASE("deposit cannot cover submission cost") {
        ContractRules pricey = instant_rules();
        pricey.base_min_deposit = 0;
        pricey.submission_cost = 80;
        Contract expensive(pricey);
        expensive.register_agent("c", 10000);
        const auto state = expensive.to_json().dump();
        const auto result = expensive.submit("c", kSample, 60, 0);
        CHECK(result.error == SubmitError::below_submission_cost);
        CHECK(describe(result.error) == std::string("deposit cannot cover submission cost"));
        CHECK(expensive.to_json().dump() == state);
        return;
    }
    CHECK(market.to_json().dump() == before);
}

TEST_CASE("cooldown not elapsed: two submissions 100 s apart") {
    ContractRules rules = instant_rules();
    rules.base_cooldown = 600;
    Contract market(rules);
    market.register_agent("a", 10000);
    REQUIRE(market.submit("a", kSample, 55, 0).ok());
    const std::string before = market.to_json().dump();
    const auto result = market.submit("a", kSample, 55, 100);
    CHECK(result.error == SubmitError::cooldown_not_elapsed);
    CHECK(describe(result.error) == std::string("cooldown not elapsed"));
    CHECK(market.to_json().dump() == before);
    CHECK(market.submit("a", kSample, 55, 600).ok());
}

TEST_CASE("claim refunds the stake plus the pool bonus") {
    Contract market(instant_rules());
    market.register_agent("a", 10000);

    SUBCASE("empty pool pays stake only") {
        const auto result = market.submit("a", kSample, 55, 0);
        const auto outcome = market.claim("a", result.id, 0, kSample.label);
        CHECK(outcome.verified);
        CHECK(outcome.paid == 50);
        CHECK(market.ledger().reward_pool == 0);
        CHECK(market.free_balance_of("a") == 9995); // cost burned
    }
    SUBCASE("five percent of a 1000 pool") {
        // seed the pool with a forfeited stake of exactly 1000
        market.register_agent("loser", 2000);
        const auto bad = market.submit("loser", kSample, 1005, 0);
        market.claim("loser", bad.id, 0, kSample.label ^ 1);
        REQUIRE(market.ledger().reward_pool == 1000);

        const auto result = market.submit("a", kSample, 55, 1);
        const auto outcome = market.claim("a", result.id, 1, kSample.label);
        CHECK(outcome.verified);
        CHECK(outcome.paid == 100); // 50 stake + floor(0.05 * 1000)
        CHECK(market.ledger().reward_pool == 950);
    }
}

TEST_CASE("failed claim forfeits the whole stake to the pool") {
    Contract market(instant_rules());
    market.register_agent("a", 10000);
    const auto result = market.submit("a", kSample, 100, 0);
    REQUIRE(market.pending(result.id)->stake == 95);
    const auto outcome = market.claim("a", result.id, 0, kSample.label ^ 1);
    CHECK_FALSE(outcome.verified);
    CHECK(outcome.paid == 0);
    CHECK(market.ledger().reward_pool == 95);
    CHECK(market.pending(result.id) == nullptr);
    CHECK(market.required_deposit("a") == 100); // one failure of one is bad standing
}

TEST_CASE("claim errors") {
    ContractRules rules = instant_rules();
    rules.refund_wait = 600;
    Contract market(rules);
    market.register_agent("a", 10000);
    market.register_agent("b", 10000);
    const auto result = market.submit("a", kSample, 55, 0);

    CHECK_THROWS_WITH(market.claim("a", 999, 600, 1), "no such pending submission");

    const std::string before = market.to_json().dump();
    CHECK_THROWS_WITH(market.claim("a", result.id, 599, 1), "refund wait not elapsed");
    CHECK(market.to_json().dump() == before);

    CHECK_THROWS_WITH(market.claim("b", result.id, 600, 1), "not the submitter");
    CHECK(market.to_json().dump() == before);

    CHECK(market.claim("a", result.id, 600, kSample.label).verified);
}

TEST_CASE("ledger_total and conservation across random operation sequences") {
    Contract fresh(instant_rules());
    fresh.register_agent("a", 10000);
    fresh.register_agent("b", 10000);
    CHECK(ledger_total(fresh.ledger()) == 20000);

    RngStream rng(555, "contract-fuzz");
    for (int round = 0; round < 20; ++round) {
        ContractRules rules;
        rules.submission_cost = static_cast<Currency>(rng.uniform_below(20));
        rules.refund_wait = static_cast<Seconds>(rng.uniform_below(50));
        rules.base_min_deposit = static_cast<Currency>(rng.uniform_below(80));
        rules.base_cooldown = static_cast<Seconds>(rng.uniform_below(5));
        rules.reward_fraction = 0.25 * rng.next_double();
        rules.standing_window = 1 + static_cast<int>(rng.uniform_below(8));
        rules.standing_threshold = rng.next_double();
        Contract market(rules);
        const Currency minted = 3000;
        market.register_agent("a", 1000);
        market.register_agent("b", 2000);

        std::vector<std::pair<AgentId, SubmissionId>> open;
        Seconds now = 0;
        Currency burned_before = 0;
        std::size_t accepted = 0;
        for (int step = 0; step < 300; ++step) {
            now += static_cast<Seconds>(rng.uniform_below(30));
            const AgentId agent = rng.uniform_below(2) == 0 ? "a" : "b";
            if (!open.empty() && rng.uniform_below(3) == 0) {
                const auto [owner, id] = open.back();
                const Seconds at = market.pending(id)->claimable_at;
                market.claim(owner, id, std::max(now, at),
                             static_cast<Label>(rng.uniform_below(2)));
                open.pop_back();
            } else {
                const Currency offered = static_cast<Currency>(rng.uniform_below(300));
                const auto result = market.submit(agent, kSample, offered, now);
                if (result.ok()) {
                    ++accepted;
                    open.emplace_back(agent, result.id);
                    CHECK(market.ledger().burned ==
                          burned_before + rules.submission_cost);
                }
            }
            burned_before = market.ledger().burned;
            REQUIRE(ledger_total(market.ledger()) == minted);
            REQUIRE(market.free_balance_of("a") >= 0);
            REQUIRE(market.free_balance_of("b") >= 0);
            REQUIRE(market.ledger().reward_pool >= 0);
        }
        // settle everything; escrow must drain to zero
        for (const auto& [owner, id] : open) {
            const Seconds at = market.pending(id)->claimable_at;
            market.claim(owner, id, std::max(now, at), static_cast<Label>(rng.uniform_below(2)));
        }
        REQUIRE(market.ledger().escrow.empty());
        REQUIRE(market.escrow_of("a") == 0);
        REQUIRE(market.escrow_of("b") == 0);
        REQUIRE(ledger_total(market.ledger()) == minted);
        (void)accepted;
    }
}

TEST_CASE("standing queries are pure") {
    Contract market(instant_rules());
    market.register_agent("a", 100000);
    Seconds now = 0;
    record_failures(market, "a", 7, now);
    const Currency d1 = market.required_deposit("a");
    const Seconds c1 = market.required_cooldown("a");
    CHECK(market.required_deposit("a") == d1);
    CHECK(market.required_cooldown("a") == c1);
}

TEST_CASE("contract rules validation") {
    ContractRules rules;
    rules.reward_fraction = 1.5;
    CHECK_THROWS_WITH(Contract{rules}, "config invalid: reward_fraction");
    rules = ContractRules{};
    rules.escalation_deposit_factor = 0.5;
    CHECK_THROWS_WITH(Contract{rules}, "config invalid: escalation_deposit_factor");
    rules = ContractRules{};
    rules.standing_window = 0;
    CHECK_THROWS_WITH(Contract{rules}, "config invalid: standing_window");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "sgsim/engine.hpp"

using namespace sgsim;

namespace {

struct Recorder : EventTarget {
    std::vector<std::pair<SimTime, std::uint64_t>> fired;
    void on_event(const EventContext& ctx) override { fired.emplace_back(ctx.now, ctx.a); }
};

} // namespace

TEST_CASE("events fire in timestamp order") {
    Engine e;
    Recorder r;
    e.schedule(5, &r, 0, 1);
    e.schedule(3, &r, 0, 2);
    e.schedule(9, &r, 0, 3);
    e.run_until(10);
    REQUIRE(r.fired.size() == 3);
    CHECK(r.fired[0] == std::pair<SimTime, std::uint64_t>{3, 2});
    CHECK(r.fired[1] == std::pair<SimTime, std::uint64_t>{5, 1});
    CHECK(r.fired[2] == std::pair<SimTime, std::uint64_t>{9, 3});
}

TEST_CASE("equal timestamps run FIFO by scheduling order") {
    Engine e;
    Recorder r;
    e.schedule(7, &r, 0, 'A');
    e.schedule(7, &r, 0, 'B');
    e.run_until(8);
    REQUIRE(r.fired.size() == 2);
    CHECK(r.fired[0].second == 'A');
    CHECK(r.fired[1].second == 'B');
}

TEST_CASE("scheduling in the past is a logic error") {
    Engine e;
    Recorder r;
    e.schedule(3, &r);
    e.run_until(3); // clock = 3
    CHECK_THROWS_AS(e.schedule(2, &r), std::logic_error);
}

TEST_CASE("run_until executes strictly-before events and lands the clock") {
    Engine e;
    Recorder r;
    for (SimTime t : {1, 2, 2, 9}) e.schedule(t, &r);
    CHECK(e.run_until(5) == 5);
    CHECK(r.fired.size() == 3); // the event at 9 stays queued
    CHECK(e.now() == 5);
    e.run_until(10);
    CHECK(r.fired.size() == 4);
}

TEST_CASE("empty queue simply advances the clock") {
    Engine e;
    CHECK(e.run_until(ticks_from_seconds(30.0)) == 30'000'000);
    CHECK(e.now() == 30'000'000);
}

TEST_CASE("cancelled events do not fire") {
    Engine e;
    Recorder r;
    EventHandle h = e.schedule(4, &r, 0, 1);
    e.schedule(5, &r, 0, 2);
    e.cancel(h);
    e.run_until(10);
    REQUIRE(r.fired.size() == 1);
    CHECK(r.fired[0].second == 2);
}

TEST_CASE("clock never decreases while running") {
    Engine e;
    struct Chaser : EventTarget {
        Engine& e;
        SimTime last = -1;
        int left = 100;
        explicit Chaser(Engine& e) : e(e) {}
        void on_event(const EventContext& ctx) override {
            CHECK(ctx.now >= last);
            last = ctx.now;
            if (left-- > 0) e.schedule(ctx.now + (left % 3), this);
        }
    } chaser(e);
    e.schedule(0, &chaser);
    e.run_until(1000);
    CHECK(chaser.last >= 0);
}

TEST_CASE("identical schedules give identical traces") {
    auto run = [] {
        Engine e;
        e.enable_trace(true);
        struct Spawner : EventTarget {
            Engine& e;
            int n = 0;
            explicit Spawner(Engine& e) : e(e) {}
            void on_event(const EventContext& ctx) override {
                if (++n < 50) {
                    e.schedule(ctx.now + n % 7, this, 1);
                    e.schedule(ctx.now + n % 5, this, 2);
                }
            }
        } s(e);
        e.schedule(0, &s);
        e.run_until(10'000);
        return e.trace();
    };
    auto t1 = run();
    auto t2 = run();
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].at == t2[i].at);
        CHECK(t1[i].seq == t2[i].seq);
        CHECK(t1[i].code == t2[i].code);
    }
}

TEST_CASE("executed log is totally ordered by (fire_at, sequence)") {
    Engine e;
    e.enable_trace(true);
    Recorder r;
    for (int i = 0; i < 200; ++i) e.schedule((i * 37) % 50, &r);
    e.run_until(100);
    const auto& tr = e.trace();
    REQUIRE(tr.size() == 200);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const bool ordered = tr[i - 1].at < tr[i].at ||
                             (tr[i - 1].at == tr[i].at && tr[i - 1].seq < tr[i].seq);
        CHECK(ordered);
    }
}

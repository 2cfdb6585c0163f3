#include <doctest.h>

#include <random>
#include <set>

#include "pplab/strategies.hpp"
#include "pplab/torus.hpp"

using namespace pplab;

namespace {

ReproductionContext ctx(long long self, long long other, double base) {
    ReproductionContext c;
    c.n_self = self;
    c.n_other = other;
    c.prev_other = other;
    c.base_rate = base;
    return c;
}

ReproductionContext trend(long long self, long long prev_other, long long other, double base) {
    auto c = ctx(self, other, base);
    c.prev_other = prev_other;
    c.dn_other = other - prev_other;
    return c;
}

Agent sheep_at(std::uint64_t id, int x, int y, double heading = 0.0) {
    return {id, Species::Sheep, x, y, heading, 0.0};
}

Agent wolf_at(std::uint64_t id, int x, int y) { return {id, Species::Wolf, x, y, 0.0, 10.0}; }

}  // namespace

TEST_CASE("reproduction_probability examples") {
    StrategySet altruistic;
    altruistic.wolves_altruistic = true;
    CHECK(reproduction_probability(ctx(130, 100, 0.05), Species::Wolf, altruistic) == 0.0);
    CHECK(reproduction_probability(ctx(50, 100, 0.05), Species::Wolf, altruistic) == 0.05);
    CHECK(reproduction_probability(ctx(100, 100, 0.05), Species::Wolf, altruistic) == 0.05);

    StrategySet fraction;
    fraction.wolves_fraction_reproduce = true;
    CHECK(reproduction_probability(ctx(100, 100, 0.05), Species::Wolf, fraction) ==
          doctest::Approx(0.025).epsilon(1e-15));
    CHECK(reproduction_probability(ctx(0, 0, 0.05), Species::Wolf, fraction) == 0.0);

    StrategySet relative;
    relative.wolves_predictive = true;
    relative.predictive_form = PredictiveForm::Relative;
    CHECK(reproduction_probability(trend(50, 100, 120, 0.05), Species::Wolf, relative) ==
          doctest::Approx(0.20).epsilon(1e-15));
    CHECK(reproduction_probability(trend(50, 100, 80, 0.05), Species::Wolf, relative) == 0.0);

    StrategySet absolute;
    absolute.wolves_predictive = true;
    absolute.predictive_form = PredictiveForm::Absolute;
    CHECK(reproduction_probability(trend(50, 100, 104, 0.05), Species::Wolf, absolute) ==
          doctest::Approx(0.20).epsilon(1e-15));
    CHECK(reproduction_probability(trend(50, 100, 80, 0.05), Species::Wolf, absolute) == 0.0);
    CHECK(reproduction_probability(trend(50, 100, 150, 0.05), Species::Wolf, absolute) == 1.0);

    StrategySet magnitude;
    magnitude.wolves_predictive = true;
    magnitude.predictive_form = PredictiveForm::Magnitude;
    CHECK(reproduction_probability(trend(50, 100, 96, 0.05), Species::Wolf, magnitude) ==
          doctest::Approx(0.20).epsilon(1e-15));

    SUBCASE("rules only touch their own species") {
        CHECK(reproduction_probability(ctx(130, 100, 0.04), Species::Sheep, altruistic) == 0.04);
        CHECK(reproduction_probability(ctx(100, 100, 0.04), Species::Sheep, fraction) == 0.04);
    }
    SUBCASE("the altruistic gate wins over the other rules") {
        StrategySet both = fraction;
        both.wolves_altruistic = true;
        CHECK(reproduction_probability(ctx(130, 100, 0.05), Species::Wolf, both) == 0.0);
    }
}

TEST_CASE("reproduction_probability properties") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<long long> count(0, 5000);
    std::uniform_real_distribution<double> rate(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.01, 50.0);
    const StrategySet baseline;
    for (int k = 0; k < 20000; ++k) {
        const auto c = trend(count(gen), count(gen), count(gen), rate(gen));
        const auto species = k % 2 ? Species::Sheep : Species::Wolf;

        // All flags off: the base rate comes back unchanged.
        CHECK(reproduction_probability(c, species, baseline) == c.base_rate);

        StrategySet s;
        s.sheep_altruistic = gen() % 2;
        s.wolves_altruistic = gen() % 2;
        s.predictive_scale = scale(gen);
        s.predictive_form = static_cast<PredictiveForm>(gen() % 3);
        if (gen() % 2) {
            s.sheep_fraction_reproduce = gen() % 2;
            s.wolves_fraction_reproduce = gen() % 2;
        } else {
            s.sheep_predictive = gen() % 2;
            s.wolves_predictive = gen() % 2;
        }
        const double p = reproduction_probability(c, species, s);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);

        // Altruistic gates mirror each other under a species swap.
        StrategySet wolf_gate, sheep_gate;
        wolf_gate.wolves_altruistic = true;
        sheep_gate.sheep_altruistic = true;
        CHECK(reproduction_probability(c, Species::Wolf, wolf_gate) ==
              reproduction_probability(c, Species::Sheep, sheep_gate));

        // Monotone predictive forms stay silent when the other species is not growing.
        if (c.dn_other <= 0) {
            StrategySet pred;
            pred.sheep_predictive = pred.wolves_predictive = true;
            pred.predictive_scale = s.predictive_scale;
            for (auto form : {PredictiveForm::Relative, PredictiveForm::Absolute}) {
                pred.predictive_form = form;
                CHECK(reproduction_probability(c, species, pred) == 0.0);
            }
        }
    }
}

TEST_CASE("make_reproduction_context") {
    PopulationHistory h;
    h.record(100, 50);
    auto c = make_reproduction_context(h, Species::Wolf, 0.05);
    CHECK(c.n_self == 50);
    CHECK(c.n_other == 100);
    CHECK(c.dn_other == 0);
    CHECK(c.prev_other == 100);

    h.record(120, 45);
    c = make_reproduction_context(h, Species::Wolf, 0.05);
    CHECK(c.dn_other == 20);
    CHECK(c.prev_other == 100);
    c = make_reproduction_context(h, Species::Sheep, 0.04);
    CHECK(c.n_self == 120);
    CHECK(c.n_other == 45);
    CHECK(c.dn_other == -5);
    CHECK(c.base_rate == 0.04);
}

TEST_CASE("flocking_heading") {
    SimConfig config;
    config.strategies.sheep_flocking = true;
    const double limit = config.strategies.flock_cohere_turn;

    SUBCASE("no neighbours leaves the heading alone") {
        WorldState w;
        w.sheep = {sheep_at(0, 10, 10, 123.0), sheep_at(1, 30, 30)};
        CHECK(flocking_heading(w.sheep[0], w, config) == 123.0);
    }
    SUBCASE("neighbour due north pulls a sheep facing east") {
        WorldState w;
        w.sheep = {sheep_at(0, 10, 10, 90.0), sheep_at(1, 10, 12)};
        const double h = flocking_heading(w.sheep[0], w, config);
        // Geometric oracle: bearing of the neighbour, then a clamped turn.
        const double target = torus::bearing(0, 2);
        const double expected = 90.0 + std::clamp(torus::turn_between(90.0, target), -limit, limit);
        CHECK(h == doctest::Approx(expected));
        CHECK(h == doctest::Approx(70.0));
    }
    SUBCASE("small turns are taken in full") {
        WorldState w;
        config.strategies.flock_cohere_turn = 30.0;
        w.sheep = {sheep_at(0, 10, 10, 0.0), sheep_at(1, 11, 12)};
        CHECK(flocking_heading(w.sheep[0], w, config) ==
              doctest::Approx(torus::bearing(1, 2)));
    }
    SUBCASE("symmetric neighbours keep the heading") {
        WorldState w;
        w.sheep = {sheep_at(0, 10, 10, 0.0), sheep_at(1, 8, 11), sheep_at(2, 12, 11)};
        CHECK(flocking_heading(w.sheep[0], w, config) == 0.0);
    }
    SUBCASE("neighbours across the seam count") {
        WorldState w;
        w.sheep = {sheep_at(0, 0, 0, 90.0), sheep_at(1, 0, 50)};
        CHECK(flocking_heading(w.sheep[0], w, config) == doctest::Approx(110.0));
    }
    SUBCASE("turn never exceeds the limit") {
        std::mt19937_64 gen(5);
        std::uniform_int_distribution<int> cell(0, 50);
        std::uniform_real_distribution<double> head(0.0, 360.0);
        for (int k = 0; k < 200; ++k) {
            WorldState w;
            for (std::uint64_t i = 0; i < 30; ++i) w.sheep.push_back(sheep_at(i, cell(gen), cell(gen), head(gen)));
            for (const auto& s : w.sheep) {
                const double h = flocking_heading(s, w, config);
                CHECK(std::abs(torus::turn_between(s.heading, h)) <= limit + 1e-9);
            }
        }
    }
}

TEST_CASE("flocking heading matches a per-neighbour centroid") {
    SimConfig config;
    const auto& st = config.strategies;
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<int> cell(0, 50);
    std::uniform_real_distribution<double> head(0.0, 360.0);
    for (int k = 0; k < 50; ++k) {
        WorldState w;
        // Dense crowds put several sheep in one cell.
        for (std::uint64_t i = 0; i < 400; ++i) {
            w.sheep.push_back(sheep_at(i, cell(gen) % 12, cell(gen) % 12, head(gen)));
        }
        const CellIndex index(w.sheep, config.grid_width, config.grid_height);
        for (const auto& s : w.sheep) {
            long long sx = 0, sy = 0;
            for (const auto& o : w.sheep) {
                if (o.id == s.id) continue;
                int dx = o.x - s.x, dy = o.y - s.y;
                if (dx > 25) dx -= 51;
                if (dx < -25) dx += 51;
                if (dy > 25) dy -= 51;
                if (dy < -25) dy += 51;
                if (dx * dx + dy * dy <= st.flock_radius * st.flock_radius) {
                    sx += dx;
                    sy += dy;
                }
            }
            double expected = s.heading;
            if (sx != 0 || sy != 0) {
                const double turn = torus::turn_between(s.heading, torus::bearing(sx, sy));
                expected = torus::normalize_heading(
                    s.heading + std::clamp(turn, -st.flock_cohere_turn, st.flock_cohere_turn));
            }
            CHECK(flocking_heading(s, index, st) == expected);
        }
    }
}

TEST_CASE("cell index radius query matches brute force") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> cell(0, 20);
    std::vector<Agent> agents;
    for (std::uint64_t i = 0; i < 300; ++i) agents.push_back(sheep_at(i, cell(gen), cell(gen)));
    const CellIndex index(agents, 21, 21);
    for (double radius : {0.0, 1.0, 2.5, 3.0, 10.0}) {
        for (int q = 0; q < 20; ++q) {
            const int x = cell(gen), y = cell(gen);
            std::multiset<std::uint32_t> fast, slow;
            index.for_each_within(x, y, radius, [&](std::uint32_t i, int, int) { fast.insert(i); });
            for (std::uint32_t i = 0; i < agents.size(); ++i) {
                if (torus::distance(x, y, agents[i].x, agents[i].y, 21, 21) <= radius) slow.insert(i);
            }
            CHECK(fast == slow);
        }
    }
}

TEST_CASE("sacrifice") {
    SimConfig config;
    config.strategies.sheep_altruistic = true;

    SUBCASE("nearest sheep closes in by one step") {
        WorldState w;
        w.wolves = {wolf_at(100, 20, 20)};
        w.sheep = {sheep_at(0, 24, 20), sheep_at(1, 40, 5), sheep_at(2, 0, 0), sheep_at(3, 20, 30),
                   sheep_at(4, 10, 45)};
        auto dist = [&](const Agent& s) {
            return torus::distance(s.x, s.y, 20, 20, config.grid_width, config.grid_height);
        };
        REQUIRE(dist(w.sheep[0]) == 4.0);
        const auto id = sacrifice_move(w, config);
        REQUIRE(id.has_value());
        CHECK(*id == 0);
        CHECK(dist(w.sheep[0]) == 3.0);
        CHECK(w.sheep[0].heading == doctest::Approx(270.0));
        CHECK(w.sheep[1] == sheep_at(1, 40, 5));
    }
    SUBCASE("diagonal approach and wrap-around") {
        WorldState w;
        w.wolves = {wolf_at(100, 1, 1)};
        w.sheep = {sheep_at(0, 48, 48), sheep_at(1, 30, 30)};
        sacrifice_move(w, config);
        CHECK(w.sheep[0].x == 49);
        CHECK(w.sheep[0].y == 49);
    }
    SUBCASE("ties go to the lowest id") {
        WorldState w;
        w.wolves = {wolf_at(100, 20, 20)};
        w.sheep = {sheep_at(7, 22, 20), sheep_at(3, 18, 20), sheep_at(5, 20, 22)};
        CHECK(sacrifice_candidate(w, config) == std::optional<std::size_t>(1));
    }
    SUBCASE("inactive with two wolves") {
        WorldState w;
        w.wolves = {wolf_at(100, 20, 20), wolf_at(101, 5, 5)};
        w.sheep = {sheep_at(0, 24, 20), sheep_at(1, 40, 5)};
        const auto before = w.sheep;
        CHECK_FALSE(sacrifice_move(w, config).has_value());
        CHECK(w.sheep == before);
    }
    SUBCASE("inactive with one sheep left") {
        WorldState w;
        w.wolves = {wolf_at(100, 20, 20)};
        w.sheep = {sheep_at(0, 24, 20)};
        CHECK_FALSE(sacrifice_move(w, config).has_value());
        CHECK(w.sheep[0].x == 24);
    }
    SUBCASE("inactive without the flag") {
        WorldState w;
        w.wolves = {wolf_at(100, 20, 20)};
        w.sheep = {sheep_at(0, 24, 20), sheep_at(1, 40, 5)};
        CHECK_FALSE(sacrifice_move(w, SimConfig{}).has_value());
    }
}

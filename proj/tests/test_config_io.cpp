#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pplab/config_io.hpp"

using namespace pplab;

TEST_CASE("parse_config reads key = value lines") {
    const auto c = parse_config(
        "# baseline with a twist\n"
        "initial_sheep = 120\n"
        "  wolf_gain_from_food=15.5   # trailing comment\n"
        "\n"
        "wolves_altruistic = yes\n"
        "predictive_form = relative\n"
        "seed = 18446744073709551615\n");
    CHECK(c.initial_sheep == 120);
    CHECK(c.wolf_gain_from_food == 15.5);
    CHECK(c.strategies.wolves_altruistic);
    CHECK(c.strategies.predictive_form == PredictiveForm::Relative);
    CHECK(c.seed == 18446744073709551615ULL);
    CHECK(c.initial_wolves == SimConfig{}.initial_wolves);
}

TEST_CASE("parse_config errors") {
    CHECK_THROWS_WITH_AS(parse_config("flock_size = 3\n"), doctest::Contains("unknown config key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("initial_sheep = 3\ninitial_sheep = 4\n"),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("initial_sheep = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("initial_sheep = 3.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sheep_flocking = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("predictive_form = quadratic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sheep_reproduce_rate = 2\n"), ConfigError);
}

TEST_CASE("format_config round-trips every key") {
    SimConfig c;
    c.seed = 99;
    c.wolf_reproduce_rate = 0.1 + 0.2;  // needs all 17 digits
    c.strategies.sheep_flocking = true;
    c.strategies.predictive_form = PredictiveForm::Magnitude;
    c.population_cap = 12345;
    const auto text = format_config(c);
    CHECK(parse_config(text) == c);

    for (const auto key : config_keys()) {
        CHECK(is_config_key(key));
        CHECK(text.find(std::string(key) + " = ") != std::string::npos);
    }
    CHECK_FALSE(is_config_key("grass"));
}

TEST_CASE("load_config") {
    const auto path = std::filesystem::temp_directory_path() / "pplab_test_config.txt";
    {
        std::ofstream out(path);
        out << "max_ticks = 77\n";
    }
    CHECK(load_config(path).max_ticks == 77);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config(path), ConfigError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "wqed/model.hpp"
#include "wqed/transport.hpp"

using namespace wqed;

TEST_CASE("validation names the offending field") {
    SystemConfig c;
    c.n_qubits = 0;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "n_qubits");
    }
    c.n_qubits = 17;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.n_qubits = 2;
    c.omega0 = 5.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.omega0 = 100.0;
    c.k0L = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.k0L = 0.5 * kPi;
    c.geometry = Geometry::SemiInfinite;
    c.k0a = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("warnings for unused or overridden settings") {
    SystemConfig c;
    c.k0L = 0.25 * kPi;
    CHECK(c.validate().size() == 1);
    c.n_qubits = 3;
    c.markovian = false;
    CHECK(c.validate().size() == 1);
}

TEST_CASE("qubit positions") {
    SystemConfig c;
    c.n_qubits = 4;
    const auto x = qubit_positions(c);
    const double L = c.spacing();
    REQUIRE(x.size() == 4);
    CHECK(x[0] == doctest::Approx(-1.5 * L));
    CHECK(x[3] == doctest::Approx(1.5 * L));
    c.geometry = Geometry::SemiInfinite;
    c.k0a = 0.25 * kPi;
    const auto s = qubit_positions(c);
    CHECK(s[3] == doctest::Approx(-c.mirror_distance()));
    CHECK(s[0] == doctest::Approx(-c.mirror_distance() - 3.0 * L));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}

TEST_CASE("drive resolution") {
    SystemConfig c;
    CHECK(resolve_drive(c, Resonant{}) == 100.0);
    CHECK(resolve_drive(c, Detuned{-1.5}) == 98.5);
    CHECK(resolve_drive(c, TargetTransmission{0.0}) == 100.0);
    CHECK(resolve_drive(c, TargetTransmission{0.5}) == doctest::Approx(99.5).epsilon(1e-7));
    CHECK_THROWS_AS(resolve_drive(c, TargetTransmission{1.5}), ConfigError);
    c.geometry = Geometry::SemiInfinite;
    CHECK_THROWS_AS(resolve_drive(c, TargetTransmission{0.5}), ConfigError);
}

TEST_CASE("target transmission lands on |t|^2 = T") {
    SystemConfig c;
    c.n_qubits = 5;
    for (double T : {0.2, 0.5, 0.8}) {
        const double k = resolve_drive(c, TargetTransmission{T});
        CHECK(transport::transmission_probability(c, k) == doctest::Approx(T).epsilon(1e-6));
        CHECK(k < c.omega0);
    }
}

TEST_CASE("config documents round-trip") {
    ConfigDocument doc;
    doc.system.geometry = Geometry::SemiInfinite;
    doc.system.n_qubits = 2;
    doc.system.k0L = 0.3 * kPi;
    doc.system.k0a = 0.25 * kPi;
    doc.drive = Detuned{-0.1};
    std::stringstream ss;
    write_config(ss, doc);
    const auto back = parse_config(ss);
    CHECK(back.system == doc.system);
    CHECK(back.drive == doc.drive);
}

TEST_CASE("config parsing") {
    std::istringstream good(
        "# two qubits\ngeometry = infinite\nn_qubits = 2  # inline\nk0L_over_pi = 0.25\n"
        "drive.mode = target_transmission\ndrive.value = 0.5\n");
    const auto doc = parse_config(good);
    CHECK(doc.system.n_qubits == 2);
    CHECK(doc.system.k0L == doctest::Approx(0.25 * kPi));
    CHECK(std::get<TargetTransmission>(doc.drive).transmission == 0.5);

    auto field_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_config(in);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("none");
    };
    CHECK(field_of("colour = blue\n") == "colour");
    CHECK(field_of("n_qubits = 2.5\n") == "n_qubits");
    CHECK(field_of("n_qubits = x\n") == "n_qubits");
    CHECK(field_of("geometry = ring\n") == "geometry");
    CHECK(field_of("drive.mode = target_transmission\n") == "drive.value");
    CHECK(field_of("geometry = semi-infinite\ndrive.mode = target_transmission\ndrive.value = 0.5\n") ==
          "drive.mode");
    CHECK(field_of("just text\n") == "line 1");
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("drive descriptions") {
    CHECK(describe(Resonant{}) == "resonant");
    CHECK(describe(Detuned{-1.0}) == "detuned(-1)");
    CHECK(describe(TargetTransmission{0.5}) == "target_transmission(0.5)");
}

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nlsist/errors.hpp"
#include "nlsist/io.hpp"
#include "nlsist/soliton.hpp"

using namespace nlsist;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / "nlsist_io_test";
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("scattering data JSON round trip") {
    ScatteringData sd;
    sd.r_grid = {-1.0, 0.0, 1.0};
    sd.r_values = {{0.1, -0.2}, {0.3, 0.0}, {0.0, 0.05}};
    sd.poles = {{0.5, 0.8}};
    sd.couplings = {{1.0, -1.0}};
    sd.a_prime_at_poles = {{0.2, 0.6}};

    const json j = to_json(sd);
    CHECK(j.at("kind") == "scattering_data");
    const ScatteringData back = scattering_from_json(j);
    CHECK(back.r_grid == sd.r_grid);
    CHECK(back.r_values == sd.r_values);
    CHECK(back.poles == sd.poles);
    CHECK(back.couplings == sd.couplings);
    CHECK(back.a_prime_at_poles == sd.a_prime_at_poles);
}

TEST_CASE("soliton params JSON omits reflection data") {
    SolitonParams p{{Complex{0.0, 1.0}, Complex{0.4, 0.5}},
                    {Complex{1.0, 0.0}, Complex{0.0, -2.0}}};
    const json j = to_json(p);
    CHECK(j.at("kind") == "soliton_params");
    CHECK(!j.contains("r"));
    const SolitonParams back = params_from_json(j);
    CHECK(back.poles == p.poles);
    CHECK(back.couplings == p.couplings);
}

TEST_CASE("potential CSV round trip is bit exact") {
    SolitonParams p{{Complex{0.2, 0.7}}, {Complex{0.9, 0.4}}};
    const SampledPotential pot = sample_n_soliton(p, -18.0, 18.0, 256, 0.3);
    const auto path = (scratch_dir() / "pot.csv").string();
    write_potential_csv(path, pot);
    const SampledPotential back = read_potential_csv(path);
    REQUIRE(back.n_points() == pot.n_points());
    CHECK(back.x_min == pot.x_min);
    CHECK(back.x_max == pot.x_max);
    for (int i = 0; i < pot.n_points(); ++i) CHECK(back.samples[i] == pot.samples[i]);
}

TEST_CASE("malformed inputs are rejected with validation errors") {
    const auto dir = scratch_dir();
    {
        std::ofstream os(dir / "bad.csv");
        os << "0.0,1.0\n";
    }
    CHECK_THROWS_AS(read_potential_csv((dir / "bad.csv").string()), ValidationError);
    {
        std::ofstream os(dir / "nan.csv");
        os << "# x,re,im\n";
        for (int i = 0; i < 32; ++i)
            os << i * 0.1 << "," << (i == 7 ? "nan" : "0.0") << ",0.0\n";
    }
    CHECK_THROWS_AS(read_potential_csv((dir / "nan.csv").string()), ValidationError);
    CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), ValidationError);
    {
        std::ofstream os(dir / "broken.json");
        os << "{ not json";
    }
    CHECK_THROWS_AS(read_json_file((dir / "broken.json").string()), ValidationError);
}

TEST_CASE("file hash is stable and content sensitive") {
    const auto dir = scratch_dir();
    {
        std::ofstream os(dir / "h1.txt");
        os << "abc";
    }
    {
        std::ofstream os(dir / "h2.txt");
        os << "abd";
    }
    const std::string h1 = file_hash((dir / "h1.txt").string());
    CHECK(h1 == file_hash((dir / "h1.txt").string()));
    CHECK(h1 != file_hash((dir / "h2.txt").string()));
    CHECK(h1.rfind("fnv1a64:", 0) == 0);
}

#ifdef NLSIST_CLI_PATH
TEST_CASE("command line: scatter -> synthesize round trip and error paths") {
    const auto dir = scratch_dir() / "cli";
    fs::create_directories(dir);
    const std::string cli = NLSIST_CLI_PATH;

    // params file for a 1-soliton (sech profile)
    SolitonParams p{{Complex{0.0, 0.5}}, {Complex{0.0, -1.0}}};
    write_json_file((dir / "params.json").string(), to_json(p));

    // synthesize the t=0 field
    std::string cmd = cli + " synthesize --params " + (dir / "params.json").string() +
                      " --xgrid -26:26:2048 --t 0 --out-dir " + (dir / "syn").string() +
                      " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    REQUIRE(fs::exists(dir / "syn" / "field_t0.csv"));
    REQUIRE(fs::exists(dir / "syn" / "manifest.json"));

    // scatter it back
    cmd = cli + " scatter --input " + (dir / "syn" / "field_t0.csv").string() +
          " --grid -5:5:65 --box -1:1:0.1:1.2 --out-dir " + (dir / "sc").string() +
          " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const json sd = read_json_file((dir / "sc" / "scattering.json").string());
    REQUIRE(sd.at("poles").size() == 1);
    CHECK(std::abs(sd["poles"][0][0].get<double>() - 0.0) < 1e-5);
    CHECK(std::abs(sd["poles"][0][1].get<double>() - 0.5) < 1e-5);
    CHECK(std::abs(sd["couplings"][0][0].get<double>() - 0.0) < 1e-3);
    CHECK(std::abs(sd["couplings"][0][1].get<double>() + 1.0) < 1e-3);
    for (const auto& rv : sd.at("r"))
        CHECK(std::hypot(rv[0].get<double>(), rv[1].get<double>()) <= 1e-6);

    // deterministic rerun: identical output bytes
    cmd = cli + " scatter --input " + (dir / "syn" / "field_t0.csv").string() +
          " --grid -5:5:65 --box -1:1:0.1:1.2 --out-dir " + (dir / "sc2").string() +
          " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(file_hash((dir / "sc" / "scattering.json").string()) ==
          file_hash((dir / "sc2" / "scattering.json").string()));

    // invalid sample -> exit code 2
    {
        std::ofstream os(dir / "nan.csv");
        os << "# x,re,im\n";
        for (int i = 0; i < 64; ++i)
            os << -10.0 + i * 0.3 << "," << (i == 20 ? "nan" : "0.0") << ",0.0\n";
    }
    cmd = cli + " scatter --input " + (dir / "nan.csv").string() + " --out-dir " +
          (dir / "err").string() + " 2> " + (dir / "err.json").string() + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    CHECK(WEXITSTATUS(rc) == 2);
    const json err = read_json_file((dir / "err.json").string());
    CHECK(err.at("error") == "invalid-sample");

    // zero potential -> no poles, r = 0
    {
        std::ofstream os(dir / "zeros.csv");
        os << "# x,re,im\n";
        for (int i = 0; i < 128; ++i) os << -12.0 + i * 0.2 << ",0.0,0.0\n";
    }
    cmd = cli + " scatter --input " + (dir / "zeros.csv").string() +
          " --grid -3:3:33 --box -1:1:0.1:1.2 --out-dir " + (dir / "z").string() +
          " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const json zd = read_json_file((dir / "z" / "scattering.json").string());
    CHECK(zd.at("poles").empty());
    for (const auto& rv : zd.at("r"))
        CHECK(std::hypot(rv[0].get<double>(), rv[1].get<double>()) < 1e-12);
}
#endif

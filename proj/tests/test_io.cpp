#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "hyperwalk/io.hpp"
#include "hyperwalk/rng.hpp"

using namespace hyperwalk;

TEST_CASE("17 significant digit formatting round-trips doubles") {
    for (const double v : {0.1, 1.0 / 3.0, 123456.789, 1e-300, -0.0}) {
        const auto s = io::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("path text round trip") {
    const RngStream stream(400, 0);
    auto cur = stream.cursor(Draw::theta, 0);
    std::vector<HyperState> states;
    for (int t = 0; t < 7; ++t) {
        std::string bits;
        for (int k = 0; k < 37; ++k) {
            bits += (cur.uniform() < 0.5) ? '0' : '1';
        }
        states.push_back(HyperState::from_string(bits));
    }
    const SamplePath path(states);
    const auto text = io::path_to_text(path);
    const auto back = io::path_from_text(text);
    CHECK(back.states() == path.states());
    const auto json = io::path_to_json(path);
    CHECK(io::path_from_json(json).states() == path.states());
}

TEST_CASE("malformed path lines are reported with their line number") {
    try {
        io::path_from_text("0101\n01x1\n");
        FAIL("expected an error");
    } catch (const io_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
        io::path_from_text("0101\n011\n");
        FAIL("expected an error");
    } catch (const io_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(io::path_from_text("\n\n"), io_error);
}

TEST_CASE("hamming csv shape") {
    const auto csv = io::hamming_series_csv({3, 2, 5});
    CHECK(csv == "t,hamming\n0,3\n1,2\n2,5\n");
}

TEST_CASE("manifest hashes round trip") {
    io::RunManifest m;
    m.command = "test";
    m.add_output("a.txt", "hello");
    m.add_output("b.txt", "world");
    CHECK(m.outputs.size() == 2);
    CHECK(m.outputs[0].fnv64 == io::fnv1a64_hex("hello"));
    CHECK(m.outputs[0].bytes == 5);
    // digest of the manifest itself parses as JSON
    const auto j = m.to_json();
    CHECK(j.find("fnv64") != std::string::npos);
}

TEST_CASE("fnv1a64 known values") {
    // standard FNV-1a test vectors
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("latent config parsing") {
    const auto iid = io::latent_from_json_text(
        R"({"variant":"iid","theta":0.4})");
    CHECK(iid.get_if<IidTheta>() != nullptr);
    const auto df = io::latent_from_json_text(
        R"({"variant":"definetti","a":2.0,"b":3.0})");
    CHECK(df.get_if<DeFinettiBeta>()->b == 3.0);
    const auto grid = io::latent_from_json_text(
        R"({"variant":"definetti","grid":[0.2,0.8],"weights":[0.5,0.5]})");
    CHECK(grid.get_if<DeFinettiGrid>() != nullptr);
    const auto ext = io::latent_from_json_text(
        R"({"variant":"extreme","m":3})");
    CHECK(ext.get_if<ExtremePoint>()->m == 3);
    const auto expl = io::latent_from_json_text(
        R"({"variant":"explicit","pmf":[0.25,0.25,0.25,0.25]})");
    CHECK(expl.get_if<ExplicitPmf>()->n == 2);
    CHECK_THROWS_AS(io::latent_from_json_text(R"({"variant":"nope"})"),
                    config_error);
    CHECK_THROWS_AS(io::latent_from_json_text(R"({"theta":0.4})"),
                    config_error);
    CHECK_THROWS_AS(
        io::latent_from_json_text(
            R"({"variant":"explicit","pmf":[0.5,0.25,0.25]})"),
        config_error);
}

TEST_CASE("simulation config parsing") {
    const auto cfg = io::sim_config_from_json_text(R"({
        "phi": 0.7, "gamma": 0.6, "n": 16,
        "latent": {"variant": "iid", "theta": 0.5},
        "steps": 10, "replicates": 2, "seed": 99,
        "initial": {"kind": "state", "bits": "1010101010101010"}
    })");
    CHECK(cfg.params.phi() == 0.7);
    CHECK(cfg.steps == 10);
    CHECK(cfg.replicates == 2);
    CHECK(cfg.seed == 99);
    CHECK(cfg.initial.kind == InitialState::Kind::explicit_state);
    CHECK_THROWS_AS(io::sim_config_from_json_text("{"), config_error);
    CHECK_THROWS_AS(io::sim_config_from_json_text(R"({"phi":0.3,"gamma":0.4,
        "n":4,"latent":{"variant":"iid","theta":0.5}})"),
                    param_domain_error);
}

TEST_CASE("file round trip") {
    const std::string path = "/tmp/hyperwalk_io_test.txt";
    io::write_text_file(path, "0101\n1010\n");
    const auto p = io::read_path_file(path);
    CHECK(p.steps() == 1);
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::read_text_file("/nonexistent/nope"), io_error);
}

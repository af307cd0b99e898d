#include "doctest_main.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latscat/serialization.hpp"

using namespace latscat;
namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("LATSCAT_BIN");
    return env ? env : "./latscat";
}

int run(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path scratch(const std::string& name) {
    const fs::path base = fs::path("cli_scratch") / name;
    fs::remove_all(base);
    fs::create_directories(base);
    return base;
}

void write_config(const fs::path& p, const json& j) { write_json_file(p.string(), j); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("run config parsing") {
    json j{{"d", 2},
           {"M", 2},
           {"lambda", 0.3},
           {"limit_sign", "+"},
           {"n_theta", 64},
           {"potential", {{"type", "random"}, {"range", {-0.5, 0.5}}, {"seed", 42}}},
           {"green", {{"method", "auto"}, {"tolerance", 1e-10}}}};
    const RunConfig c = RunConfig::from_json(j);
    CHECK(c.d == 2);
    CHECK(c.n_theta == 64);
    CHECK(c.seed == 42);
    CHECK(c.green_tolerance == 1e-10);
    const Potential V = c.make_potential();
    CHECK(V.max_abs() <= 0.5);
    CHECK(V.support().size() == 4);

    CHECK_THROWS_AS(RunConfig::from_json(json{{"limit_sign", "x"}}), validation_error);
    CHECK(config_hash(j) == config_hash(j));
    json j2 = j;
    j2["seed"] = 43;
    CHECK(config_hash(j) != config_hash(j2));
}

TEST_CASE("serialization round trips") {
    // boundary operator
    RectDomain dom(2, 2);
    BoundaryOperator op;
    op.kind = BoundaryOpKind::InteriorDN;
    op.lambda = 0.3;
    op.vertices = dom.boundary();
    op.mat = Eigen::MatrixXcd::Random(8, 8);
    const json j = boundary_operator_to_json(op, 2, 2);
    int d = 0, M = 0;
    const BoundaryOperator back = boundary_operator_from_json(j, &d, &M);
    CHECK(d == 2);
    CHECK(M == 2);
    CHECK((back.mat - op.mat).norm() == 0.0);
    CHECK(back.vertices == op.vertices);

    // potential
    Potential V = Potential::random(dom, -0.5, 0.5, 42);
    const Potential V2 = potential_from_json(potential_to_json(V));
    for (const auto& n : dom.interior()) CHECK(V2.at(n) == V.at(n));

    // operator matrix
    OperatorMatrix om(Eigen::MatrixXcd::Random(4, 4), IndexKind::Angular, IndexKind::Angular, 0.3);
    const OperatorMatrix om2 = operator_matrix_from_json(operator_matrix_to_json(om));
    CHECK((om2.mat - om.mat).norm() == 0.0);
    CHECK(om2.rows == IndexKind::Angular);
}

TEST_CASE("cli: dnmap golden file and invert round trip") {
    const fs::path dir = scratch("dnmap");
    write_config(dir / "unit.json", json{{"d", 2}, {"M", 1}, {"lambda", 0.0}});
    REQUIRE(run("--config " + (dir / "unit.json").string() + " --out " + dir.string() + " dnmap") ==
            0);
    int d = 0, M = 0;
    const BoundaryOperator lam =
        boundary_operator_from_json(load_json_file((dir / "dnmap.json").string()), &d, &M);
    CHECK(d == 2);
    CHECK(M == 1);
    const Eigen::MatrixXcd golden =
        0.25 * Eigen::MatrixXcd::Identity(4, 4) - (1.0 / 16.0) * Eigen::MatrixXcd::Ones(4, 4);
    CHECK((lam.mat - golden).cwiseAbs().maxCoeff() <= 1e-14);

    // full pipeline on a random potential
    write_config(dir / "rand.json",
                 json{{"d", 2},
                      {"M", 3},
                      {"lambda", 0.3},
                      {"potential", {{"type", "random"}, {"range", {-0.5, 0.5}}, {"seed", 7}}}});
    REQUIRE(run("--config " + (dir / "rand.json").string() + " --out " + dir.string() +
                " dnmap") == 0);
    REQUIRE(run("--config " + (dir / "rand.json").string() + " --out " + dir.string() +
                " invert-dn " + (dir / "dnmap.json").string()) == 0);
    const Potential rec = potential_from_json(load_json_file((dir / "potential.json").string()));
    const Potential truth = Potential::random(RectDomain(2, 3), -0.5, 0.5, 7);
    for (const auto& n : rec.domain().interior())
        CHECK(std::abs(rec.at(n) - truth.at(n)) <= 1e-7);
}

TEST_CASE("cli: forward determinism and invert-smatrix") {
    const fs::path dir = scratch("forward");
    const json cfg{{"d", 2},
                   {"M", 2},
                   {"lambda", 0.3},
                   {"n_theta", 64},
                   {"potential", {{"type", "random"}, {"range", {-0.5, 0.5}}, {"seed", 42}}}};
    write_config(dir / "cfg.json", cfg);
    const std::string common = "--config " + (dir / "cfg.json").string();

    REQUIRE(run(common + " --out " + (dir / "a").string() + " forward") == 0);
    REQUIRE(run(common + " --out " + (dir / "b").string() + " forward") == 0);
    CHECK(slurp(dir / "a" / "amplitude.json") == slurp(dir / "b" / "amplitude.json"));
    CHECK(slurp(dir / "a" / "smatrix.json") == slurp(dir / "b" / "smatrix.json"));

    REQUIRE(run(common + " --out " + (dir / "inv").string() + " invert-smatrix " +
                (dir / "a" / "amplitude.json").string()) == 0);
    const Potential rec =
        potential_from_json(load_json_file((dir / "inv" / "potential.json").string()));
    const Potential truth = Potential::random(RectDomain(2, 2), -0.5, 0.5, 42);
    for (const auto& n : rec.domain().interior())
        CHECK(std::abs(rec.at(n) - truth.at(n)) <= 1e-3);

    // zero potential: amplitude file full of zeros
    write_config(dir / "zero.json", json{{"d", 2}, {"M", 2}, {"lambda", 0.3}, {"n_theta", 16}});
    REQUIRE(run("--config " + (dir / "zero.json").string() + " --out " + (dir / "z").string() +
                " forward") == 0);
    const OperatorMatrix A0 =
        operator_matrix_from_json(load_json_file((dir / "z" / "amplitude.json").string()));
    CHECK(A0.mat.norm() == 0.0);
}

TEST_CASE("cli: exit codes") {
    const fs::path dir = scratch("exitcodes");
    // threshold energy -> validation error
    write_config(dir / "bad.json", json{{"d", 2}, {"M", 2}, {"lambda", 1.0}});
    CHECK(run("--config " + (dir / "bad.json").string() + " --out " + dir.string() + " forward") ==
          2);
    // Dirichlet eigenvalue of the free M = 2 cube -> exceptional energy
    write_config(dir / "eig.json", json{{"d", 2}, {"M", 2}, {"lambda", 0.5}});
    CHECK(run("--config " + (dir / "eig.json").string() + " --out " + dir.string() + " dnmap") ==
          4);
    // malformed input file -> validation error
    std::ofstream(dir / "junk.json") << "{}";
    CHECK(run("--out " + dir.string() + " invert-dn " + (dir / "junk.json").string()) == 2);

    // numerical gate failure: invert a perturbed (hence inconsistent) D-N map;
    // corrupting the face-to-face block breaks every synthesized datum, which
    // the zero-pattern equations next to the far face detect
    write_config(dir / "ok.json",
                 json{{"d", 2},
                      {"M", 3},
                      {"lambda", 0.3},
                      {"potential", {{"type", "random"}, {"range", {-0.5, 0.5}}, {"seed", 3}}}});
    REQUIRE(run("--config " + (dir / "ok.json").string() + " --out " + dir.string() + " dnmap") ==
            0);
    json dn = load_json_file((dir / "dnmap.json").string());
    RectDomain dom(2, 3);
    const int row = dom.boundary_index(LatticePoint{0, 1});
    const int col = dom.boundary_index(LatticePoint{4, 1});
    json& data = dn.at("matrix").at("data");
    const int flat = row * dom.num_boundary() + col;
    data[flat][0] = data[flat][0].get<double>() + 1e-2;
    write_json_file((dir / "broken.json").string(), dn);
    CHECK(run("--out " + dir.string() + " invert-dn " + (dir / "broken.json").string()) == 3);
}

TEST_CASE("cli: green tables and cache reuse") {
    const fs::path dir = scratch("green");
    write_config(dir / "cfg.json", json{{"d", 2}, {"M", 2}, {"lambda", 0.3}});
    const std::string common = "--config " + (dir / "cfg.json").string() + " --cache " +
                               (dir / "cache").string() + " --out " + dir.string();
    REQUIRE(run(common + " green --max-radius 4") == 0);
    const GreenTable t = green_table_from_json(load_json_file((dir / "green.json").string()));
    CHECK(r0_defect(t) <= 1e-9);

    // the cache directory now holds a table keyed by the run parameters
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir / "cache")) found |= e.path().extension() == ".json";
    CHECK(found);
    // second run reuses it (and must produce the identical output)
    const std::string first = slurp(dir / "green.json");
    REQUIRE(run(common + " green --max-radius 4") == 0);
    CHECK(slurp(dir / "green.json") == first);
}

TEST_CASE("cli: surface report") {
    const fs::path dir = scratch("surface");
    write_config(dir / "cfg.json", json{{"d", 3}, {"M", 2}, {"lambda", 1.45}});
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " + dir.string() +
                " surface --samples 4000") == 0);
    const json j = load_json_file((dir / "surface.json").string());
    CHECK_FALSE(j.at("convex").get<bool>());

    write_config(dir / "cfg2.json", json{{"d", 3}, {"M", 2}, {"lambda", 0.45}});
    REQUIRE(run("--config " + (dir / "cfg2.json").string() + " --out " + dir.string() +
                " surface --samples 4000") == 0);
    CHECK(load_json_file((dir / "surface.json").string()).at("convex").get<bool>());
}

TEST_CASE("cli: selftest on the reference configuration") {
    const fs::path dir = scratch("selftest");
    write_config(dir / "cfg.json",
                 json{{"d", 2},
                      {"M", 2},
                      {"lambda", 0.3},
                      {"n_theta", 256},
                      {"potential", {{"type", "random"}, {"range", {-0.5, 0.5}}, {"seed", 42}}}});
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " + dir.string() +
                " selftest") == 0);
    const json rep = load_json_file((dir / "selftest.json").string());
    CHECK(rep.at("pass").get<bool>());
    for (const auto& g : rep.at("gates")) CHECK(g.at("pass").get<bool>());
}

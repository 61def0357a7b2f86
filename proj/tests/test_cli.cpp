#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "tenspec/json_io.hpp"
#include "tenspec/odeco.hpp"
#include "tenspec/random.hpp"
#include "tenspec/spectral.hpp"
#include "tenspec/subdiff.hpp"

using namespace tenspec;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;

    json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Workspace {
    std::filesystem::path dir;

    Workspace() : dir(std::filesystem::temp_directory_path() / "tenspec-cli-test") {
        std::filesystem::create_directories(dir);
    }
    ~Workspace() { std::filesystem::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("norm of diag(2,1)") {
    Workspace ws;
    io::write_tensor(ws.path("diag21.json"), testing::diag21());
    const auto r = run({"norm", "--p", "2", "--q", "2", "--lambda", "1", "--in", ws.path("diag21.json")});
    CHECK(r.code == 0);
    CHECK(r.doc()["value"].get<double>() == doctest::Approx(3.872983346207417).epsilon(1e-15));

    const auto nuc = run({"norm", "--in", ws.path("diag21.json")});
    CHECK(nuc.doc()["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("vn-check of a tensor with itself") {
    Workspace ws;
    io::write_tensor(ws.path("a.json"), random_gaussian(Shape{2, 3, 2}, 1));
    const auto r = run({"vn-check", "--x", ws.path("a.json"), "--y", ws.path("a.json"), "--tol", "1e-10"});
    CHECK(r.code == 0);
    const json d = r.doc();
    CHECK(d["equality"] == true);
    for (const auto& g : d["per_mode_gap"]) CHECK(std::abs(g.get<double>()) <= 1e-12);
}

TEST_CASE("vn-check with frames") {
    Workspace ws;
    const auto rep = random_odeco(Shape{3, 3, 3}, 3, 2);
    io::write_odeco(ws.path("x.json"), rep);
    const auto y = make_odeco({5, 1, 0.5}, rep.factors(), rep.shape());
    io::write_odeco(ws.path("y.json"), y);
    const auto frames = odeco_hosvd(rep).factors;
    std::string list;
    for (std::size_t d = 0; d < 3; ++d) {
        const std::string f = ws.path("f" + std::to_string(d) + ".json");
        io::write_json(f, io::to_json(frames[d]));
        list += (d ? "," : "") + f;
    }
    const auto r = run({"vn-check", "--x", ws.path("x.json"), "--y", ws.path("y.json"), "--frames", list});
    CHECK(r.code == 0);
    CHECK(r.doc()["holds"] == true);
}

TEST_CASE("subgrad then check-subgrad") {
    Workspace ws;
    CHECK(run({"gen", "--kind", "odeco", "--shape", "3,3,3", "--rank", "2", "--seed", "4", "--out", ws.path("odeco.json")})
              .code == 0);
    const auto g = run({"subgrad", "--p", "1", "--q", "1", "--lambda", "auto", "--in", ws.path("odeco.json"), "--out",
                        ws.path("g.json")});
    CHECK(g.code == 0);
    const auto c = run({"check-subgrad", "--x", ws.path("odeco.json"), "--g", ws.path("g.json"), "--trials", "200"});
    CHECK(c.code == 0);
    CHECK(c.doc()["accepted"] == true);
    CHECK(c.doc()["status"] == "accepted");
    CHECK(c.doc()["min_slack"].get<double>() >= -1e-9);
}

TEST_CASE("gen") {
    Workspace ws;
    const auto a = run({"gen", "--kind", "symmetric", "--shape", "3,3,3", "--seed", "7", "--out", ws.path("a.json")});
    const auto b = run({"gen", "--kind", "symmetric", "--shape", "3,3,3", "--seed", "7", "--out", ws.path("b.json")});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(is_symmetric(io::read_tensor(ws.path("a.json")), 1e-12));

    const auto o = run({"gen", "--kind", "odeco", "--shape", "2,3", "--rank", "2"});
    CHECK(o.code == 0);
    CHECK_NOTHROW(io::odeco_from_json(o.doc()));

    const auto too_big = run({"gen", "--kind", "odeco", "--shape", "2,3", "--rank", "3"});
    CHECK(too_big.code == 1);
    CHECK(too_big.doc().contains("error"));

    CHECK(run({"gen", "--kind", "symmetric", "--shape", "2,3"}).code == 1);
}

TEST_CASE("conjugate-check") {
    Workspace ws;
    // Dual norm sqrt(3 * 34) / 3 > 1: outside the dual ball.
    const Matrix i2 = Matrix::identity(2);
    const auto rep = make_odeco({5, 3}, {i2, i2, i2}, Shape{2, 2, 2});
    io::write_odeco(ws.path("x.json"), rep);
    const auto r = run({"conjugate-check", "--in", ws.path("x.json"), "--p", "2", "--q", "2", "--budget", "500"});
    CHECK(r.code == 0);
    const json d = r.doc();
    CHECK(d["analytic"]["finite"] == false);
    CHECK(d["estimate"]["value"].get<double>() > 0.0);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"norm"}).code == 2);
    CHECK(run({"norm", "--in", "x.json", "--p", "abc"}).code == 2);
    CHECK(run({"norm", "--in", "x.json", "--lambda", "abc"}).code == 2);
    CHECK(run({"gen", "--kind", "cubes", "--shape", "2,2"}).code == 2);
    CHECK(run({"verify", "--quick", "--fraction", "0.5"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto missing = run({"norm", "--in", "/nonexistent/file.json"});
    CHECK(missing.code == 1);
    CHECK(missing.doc().contains("error"));

    Workspace ws;
    io::write_tensor(ws.path("x.json"), testing::diag21());
    const auto bad_p = run({"norm", "--in", ws.path("x.json"), "--p", "0.5"});
    CHECK(bad_p.code == 1);
    CHECK(bad_p.doc().contains("error"));
}

TEST_CASE("CLI agrees with the API and verify is deterministic") {
    for (const auto& check : cli::cli_checks(0, 0.1)) {
        INFO(check.name);
        CHECK(check.trials > 0);
        CHECK(check.failures == 0);
    }
}

}

#include "cli_support.hpp"
#include "ellfrob/errors.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ellfrob;
using namespace ellfrob::cli;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(ELLFROB_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

cplx value_of(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("ellfrob_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0));
    CHECK(parse_complex("0+1i") == cplx(0, 1));
    CHECK(parse_complex("-2i") == cplx(0, -2));
    CHECK(parse_complex("i") == cplx(0, 1));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("0.1-1.3e-2i") == cplx(0.1, -0.013));
    CHECK(parse_complex(" 3 - i ") == cplx(3, -1));
    for (const char* bad : {"", "abc", "1+", "1+2j", "i2", "1..2"}) CHECK_THROWS_AS(parse_complex(bad), ParseError);
    CHECK(parse_complex_list("-1,1,0+1i", 3).size() == 3);
    CHECK_THROWS_AS(parse_complex_list("1,2", 3), ParseError);
    CHECK_THROWS_AS(parse_real_list("1,2i"), ParseError);
    CHECK_THROWS_AS(parse_format("xml"), ParseError);
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(to_json(cplx(1, -2)) == json::array({1.0, -2.0}));
}

TEST_CASE("configuration precedence") {
    const auto path = scratch("cfg.toml");
    {
        std::ofstream f(path);
        f << "seed = 11\nsamples = 40\nformat = \"csv\"\nu_grid = [30.0, 60.0, 120.0]\n";
    }
    const Overrides file = read_toml(path.string());
    Overrides flags;
    flags.seed = 3;
    const RunSettings s = resolve(flags, file);
    CHECK(s.run.seed == 3);
    CHECK(s.run.samples == 40);
    CHECK(s.format == Format::csv);
    CHECK(s.run.u_grid == std::vector<double>{30, 60, 120});
    const RunSettings d = resolve({}, {});
    CHECK(d.run.seed == RunConfig{}.seed);
    CHECK(d.format == Format::json);

    {
        std::ofstream f(path);
        f << "seeds = 1\n";
    }
    CHECK_THROWS_AS(read_toml(path.string()), ParseError);
    {
        std::ofstream f(path);
        f << "samples = \"many\"\n";
    }
    CHECK_THROWS_AS(read_toml(path.string()), ParseError);
    std::filesystem::remove(path);

    Overrides neg;
    neg.samples = 0;
    CHECK_THROWS(resolve(neg, {}));
}

TEST_CASE("eval") {
    const Run e4 = run("eval E4 --tau 0+10i");
    REQUIRE(e4.code == 0);
    CHECK(std::abs(value_of(json::parse(e4.out)["value"]) - 1.0) < 1e-15);

    const Run e2 = run("eval e2 --tau 0+1i");
    REQUIRE(e2.code == 0);
    CHECK(std::abs(value_of(json::parse(e2.out)["value"])) < 1e-12);

    // t1 = -1, t2 = 1, tau = i: the potential reduces to -pi - 1 - 1/(8 pi)
    const Run pot = run("eval potential --t -1,1,0+1i");
    REQUIRE(pot.code == 0);
    const double pi = std::acos(-1.0);
    CHECK(std::abs(value_of(json::parse(pot.out)["value"]) - (-pi - 1.0 - 1.0 / (8 * pi))) < 1e-10);

    CHECK(run("eval E4 --tau 0-1i").code == 2);
    CHECK(run("eval E4 --tau nonsense").code == 2);
    CHECK(run("eval nosuchfunction").code == 2);
}

TEST_CASE("verify") {
    CHECK(run("verify nosuchsuite").code == 2);
    CHECK(run("verify lattice --samples -3").code == 2);
    CHECK(run("verify lattice --format xml").code == 2);

    const Run lat = run("verify lattice");
    REQUIRE(lat.code == 0);
    const json rep = json::parse(lat.out);
    bool all = true;
    for (const auto& suite : rep["suites"])
        for (const auto& c : suite["checks"]) all &= c["passed"].get<bool>() && !c["tag"].get<std::string>().empty();
    CHECK(all);

    // fixed seed: byte-identical reports, whatever the worker count
    const auto a = scratch("a.json"), b = scratch("b.json");
    REQUIRE(run("verify identities --samples 20 --seed 5 --workers 1 --out " + a.string()).code == 0);
    REQUIRE(run("verify identities --samples 20 --seed 5 --workers 4 --out " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    std::filesystem::remove(a);
    std::filesystem::remove(b);

    const Run csv = run("verify lattice --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("suite,", 0) == 0);
}

TEST_CASE("braid, ll and roots") {
    const Run x = run("braid \"s1 s2 s1\" --start P"), y = run("braid \"s2 s1 s2\" --start P");
    REQUIRE(x.code == 0);
    REQUIRE(y.code == 0);
    CHECK(json::parse(x.out)["triple"] == json::parse(y.out)["triple"]);
    CHECK(json::parse(x.out)["exceptional"].get<bool>());
    CHECK(run("braid \"s3\"").code == 2);
    CHECK(run("braid s1 --start \"1,0,0;1,0,0;0,0,1\"").code == 1);

    const Run fwd = run("ll forward --s 0.3,1.2,0.1+1.3i");
    REQUIRE(fwd.code == 0);
    const json forward = json::parse(fwd.out);
    std::string u;
    for (const auto& v : forward["u"]) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v[0].get<double>(), v[1].get<double>());
        u += (u.empty() ? "" : ",") + std::string(buf);
    }
    const Run inv = run("ll inverse --u " + u);
    REQUIRE(inv.code == 0);
    CHECK(run("ll inverse --u 1,1,2").code == 1);

    const Run roots = run("roots --bound 2");
    REQUIRE(roots.code == 0);
    std::stringstream ss(roots.out);
    std::string line;
    bool has_a1 = false, has_alpha = false;
    while (std::getline(ss, line)) {
        has_a1 |= line == "1,-1,0";
        has_alpha |= line == "1,0,0";
    }
    CHECK(has_a1);
    CHECK_FALSE(has_alpha);
}

TEST_CASE("gamma and frobenius") {
    const Run g = run("gamma --u-grid 25,50,100,200");
    REQUIRE(g.code == 0);
    const json gj = json::parse(g.out);
    REQUIRE(gj["fits"].size() == 3);
    for (const auto& fit : gj["fits"]) CHECK(fit["leading_rel_error"].get<double>() < 1e-2);
    CHECK(run("gamma --t -1,1,0.2+1i").code == 2);

    const Run f = run("frobenius --t -1,1,0+1i");
    REQUIRE(f.code == 0);
    const json j = json::parse(f.out);
    CHECK(std::abs(value_of(j["intersection_form"][0][2]) - cplx(-1, 0)) < 1e-8);
    CHECK(j["wdvv_residual"].get<double>() < 1e-9);
    CHECK(run("frobenius --s 0.3,0,0+1i").code == 2);
}

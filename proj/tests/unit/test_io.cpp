#include <adastable/error.hpp>
#include <adastable/cli.hpp>
#include <adastable/csv.hpp>
#include <adastable/io.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace adastable;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("adastable_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "adastable");
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_command(args, out, err);
    return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-320}) {
        double back = 0.0;
        REQUIRE(parse_double(format_double(v), back));
        CHECK(back == v);
    }
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
    double v = 0.0;
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK_FALSE(parse_double("", v));
    CHECK(parse_double(" 2.5\r", v));
    CHECK(v == 2.5);
}

TEST_CASE("log returns") {
    std::istringstream in("1\n2.718281828459045\n2.718281828459045\n");
    const auto r = read_series(in, SeriesFormat::Plain, "", SeriesTransform::LogReturns);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r[1] == 0.0);
    std::istringstream bad("1\n-2\n");
    try {
        read_series(bad, SeriesFormat::Plain, "", SeriesTransform::LogReturns);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("close-price CSV yields one fewer return") {
    std::ostringstream csv;
    csv << "date,close\n";
    for (int i = 0; i < 2518; ++i) csv << "d" << i << ',' << 100.0 + (i % 17) << '\n';
    std::istringstream in(csv.str());
    CHECK(read_series(in, SeriesFormat::Csv, "close", SeriesTransform::LogReturns).size() == 2517);
}

TEST_CASE("malformed rows name their line") {
    std::istringstream plain("1\n\n2\nabc\n");
    try {
        read_series(plain, SeriesFormat::Plain, "", SeriesTransform::None);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 4);
    }
    std::istringstream missing("a,b\n1,2\n3\n");
    try {
        read_series(missing, SeriesFormat::Csv, "b", SeriesTransform::None);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream empty_field("a,b\n1,2\n3,\n");
    try {
        read_series(empty_field, SeriesFormat::Csv, "b", SeriesTransform::None);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream no_col("a,b\n1,2\n");
    CHECK_THROWS_AS(read_series(no_col, SeriesFormat::Csv, "close", SeriesTransform::None), InputError);
    CHECK_THROWS_AS(load_series({"/nonexistent/file.txt", SeriesFormat::Plain, "", SeriesTransform::None}), InputError);
}

TEST_CASE("cumulative sum transform") {
    std::istringstream in("1\n2\n3.5\n");
    CHECK(read_series(in, SeriesFormat::Plain, "", SeriesTransform::CumulativeSum) == std::vector<double>{1.0, 3.0, 6.5});
}

TEST_CASE("config JSON round trip") {
    TrackerConfig c;
    c.rates = {0.1 + 0.2, 0.05, 1.0 / 3.0};
    c.powers = {0.8, 0.45, 0.15};
    c.beta = -0.3;
    c.sigma_multiplier = 1.0;
    c.warmup = 123;
    c.alpha_min = 1.1;
    c.alpha_max = 1.99;
    c.alpha_step = 0.0025;
    c.sigma_floor = 3e-9;
    CHECK(config_from_json(nlohmann::json::parse(config_to_json(c).dump())) == c);
    c.fixed_alpha = 1.7;
    CHECK(config_from_json(nlohmann::json::parse(config_to_json(c).dump())) == c);
    const auto doc = config_to_json(TrackerConfig{});
    for (const char* key : {"eta1", "eta2", "eta3", "p_sigma", "p1", "p2", "beta", "sigma_multiplier", "warmup",
                            "alpha_min", "alpha_max", "alpha_step", "alpha_mode", "sigma_floor"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc.size() == 14);
    CHECK(config_from_json(nlohmann::json::object()) == TrackerConfig{});
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"eta4": 0.1})")), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"eta1": "fast"})")), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"eta1": 1.5})")), InputError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"alpha_mode": "fixed"})")), InputError);
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("1.0:2.0:0.05");
    CHECK(g.size() == 21);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 2.0);
    CHECK(parse_grid("0.25,0.5,1") == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(parse_grid("3") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_grid("1:2"), InputError);
    CHECK_THROWS_AS(parse_grid("2:1:0.1"), InputError);
    CHECK_THROWS_AS(parse_grid("1,x"), InputError);
}

TEST_CASE("atomic writes leave no temp file") {
    TempDir dir;
    const fs::path p = dir.path / "a.csv";
    write_file_atomic(p, [](std::ostream& os) { os << "x\n1\n"; });
    CHECK(slurp(p) == "x\n1\n");
    CHECK_FALSE(fs::exists(dir.path / "a.csv.tmp"));
}

TEST_CASE("CLI track is deterministic and round-trips its config") {
    TempDir dir;
    const std::string d = dir.path.string();
    REQUIRE(cli({"simulate", "--alpha", "1.6", "--n", "3000", "--seed", "5", "--out", d}).status == 0);
    const std::string series = d + "/series.txt";
    const Run a = cli({"track", "--input", series, "--out", d + "/a", "--emit-config", d + "/cfg.json"});
    REQUIRE(a.status == 0);
    const Run b = cli({"track", "--input", series, "--out", d + "/b", "--config", d + "/cfg.json"});
    REQUIRE(b.status == 0);
    CHECK(slurp(d + "/a/track.csv") == slurp(d + "/b/track.csv"));
    CHECK(slurp(d + "/a/summary.json") == slurp(d + "/b/summary.json"));
    CHECK(load_config(d + "/cfg.json") == TrackerConfig{});
    const std::string csv = slurp(d + "/a/track.csv");
    CHECK(csv.rfind("t,x,mu,sigma,alpha,beta,logpdf\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);

    const auto summary = nlohmann::json::parse(slurp(d + "/a/summary.json"));
    CHECK(summary["evaluated"] == 2700);
    CHECK(summary["final_theta"].contains("alpha"));
}

TEST_CASE("CLI emit-config alone") {
    TempDir dir;
    std::ofstream(dir.path / "in.json") << R"({"eta2": 0.05, "p_sigma": 0.8, "alpha_mode": {"fixed": 1.6}})";
    const fs::path out = dir.path / "out.json";
    REQUIRE(cli({"track", "--config", (dir.path / "in.json").string(), "--emit-config", out.string()}).status == 0);
    const TrackerConfig c = load_config(out);
    CHECK(c.rates.eta2 == 0.05);
    CHECK(c.powers.p_sigma == 0.8);
    CHECK(c.fixed_alpha == 1.6);
    CHECK(c == load_config(dir.path / "in.json"));
}

TEST_CASE("CLI analysis commands produce their files") {
    TempDir dir;
    const std::string d = dir.path.string();
    REQUIRE(cli({"simulate", "--alpha", "1.5", "--n", "4000", "--seed", "9", "--out", d}).status == 0);
    const std::string series = d + "/series.txt";
    REQUIRE(cli({"sweep", "--input", series, "--alphas", "1.3:1.7:0.1", "--static", "--out", d}).status == 0);
    CHECK(slurp(d + "/sweep.csv").rfind("alpha,mean_loglik\n", 0) == 0);
    CHECK(slurp(d + "/sweep_static.csv").rfind("alpha,sigma,mean_loglik\n", 0) == 0);
    REQUIRE(cli({"static", "--input", series, "--out", d}).status == 0);
    const auto st = nlohmann::json::parse(slurp(d + "/static.json"));
    CHECK(std::abs(st["alpha"].get<double>() - 1.5) < 0.1);
    REQUIRE(cli({"garch", "--input", series, "--out", d}).status == 0);
    CHECK(nlohmann::json::parse(slurp(d + "/garch.json"))["model"] == "garch11");
    REQUIRE(cli({"hurst", "--input", series, "--transform", "cumsum", "--taus", "1,2,4,8,16", "--gaussianize", "--out", d}).status == 0);
    CHECK(slurp(d + "/zeta.csv").rfind("q,zeta,r2\n", 0) == 0);
    CHECK(slurp(d + "/structure.csv").rfind("q,tau,S\n", 0) == 0);
    CHECK(slurp(d + "/hurst_t.csv").rfind("t,alpha,H\n", 0) == 0);
    CHECK(slurp(d + "/gaussianized.csv").rfind("t,x,g\n", 0) == 0);
    REQUIRE(cli({"tails", "--input", series, "--ks", "1:4:1", "--normalization", "static", "--out", d}).status == 0);
    CHECK(slurp(d + "/tails.csv").rfind("k,side,source,probability\n", 0) == 0);
    CHECK(nlohmann::json::parse(slurp(d + "/extremes.json")).contains("total"));
    REQUIRE(cli({"table", "--out", d}).status == 0);
    CHECK(slurp(d + "/alpha_table.csv").rfind("alpha,ratio\n", 0) == 0);

    std::ofstream(dir.path / "prices.csv") << "date,close\n1,100\n2,101\n3,99.5\n";
    REQUIRE(cli({"static", "--input", d + "/prices.csv", "--format", "csv", "--column", "close", "--transform",
                 "log-returns", "--out", d + "/p"}).status != 0);
}

TEST_CASE("CLI errors are one JSON line") {
    TempDir dir;
    std::ofstream(dir.path / "bad.txt") << "1\n-2\n";
    const Run r = cli({"track", "--input", (dir.path / "bad.txt").string(), "--transform", "log-returns", "--out",
                       dir.path.string()});
    CHECK(r.status != 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    const auto doc = nlohmann::json::parse(r.err);
    CHECK(doc["error"] == "input");
    CHECK(doc["line"] == 2);

    const Run u = cli({"sweep", "--format", "xml"});
    CHECK(u.status == 2);
    CHECK(nlohmann::json::parse(u.err)["error"] == "usage");
    CHECK(cli({}).status == 2);
    const Run m = cli({"track", "--input", (dir.path / "missing.txt").string()});
    CHECK(m.status != 0);
    CHECK(nlohmann::json::parse(m.err)["error"] == "input");
    const Run h = cli({"--help"});
    CHECK(h.status == 0);
    CHECK(h.out.find("track") != std::string::npos);
}

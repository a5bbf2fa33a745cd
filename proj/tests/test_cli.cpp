#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinlab/config.hpp"
#include "spinlab/report.hpp"
#include "spinlab/runner.hpp"

using namespace spinlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
        : path(std::filesystem::temp_directory_path() / ("spinlab_test_" + tag)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("svg renderer: single polyline, deterministic bytes, empty series rejected") {
    Series s{"points", {{1.0, 2.0}, {2.0, 3.0}}};
    PlotSpec spec;
    spec.title = "demo";
    spec.x_label = "x";
    spec.y_label = "y";
    const std::string a = render_svg({s}, spec, "header");
    const std::string b = render_svg({s}, spec, "header");
    CHECK(a == b);
    CHECK(a.find("<polyline") != std::string::npos);
    CHECK(a.find("header") != std::string::npos);
    CHECK_THROWS_AS(render_svg({}, spec, "h"), EmptySeries);
    Series empty{"none", {}};
    CHECK_THROWS_AS(render_svg({empty}, spec, "h"), EmptySeries);
}

TEST_CASE("svg loglog plot carries the guide slope") {
    Series s{"err", {{4.0, 0.1}, {16.0, 0.05}, {64.0, 0.025}}};
    PlotSpec spec;
    spec.title = "rate";
    spec.x_label = "K";
    spec.y_label = "e";
    spec.style = PlotStyle::loglog;
    spec.guide_slope = -0.5;
    const std::string svg = render_svg({s}, spec, "h");
    CHECK(svg.find("slope -0.5") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("csv embeds the config header and 17-digit floats") {
    TempDir tmp("csv");
    ReportWriter w(tmp.path.string(), 0xabcdef, 7);
    w.write_csv("t.csv", {"a", "b"}, {{1.0 / 3.0, 2.0}});
    const std::string text = slurp((tmp.path / "t.csv").string());
    CHECK(text.find("# spinlab v") != std::string::npos);
    CHECK(text.find("seed=7") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("validate command reports without failing") {
    TempDir tmp("validate");
    RunConfig cfg;
    cfg.command = "validate";
    cfg.potential_name = "barthe-wolff";
    cfg.out_dir = (tmp.path / "out").string();
    CHECK(run(cfg) == 0);
    const std::string text = slurp((tmp.path / "out" / "validate.json").string());
    CHECK(text.find("\"admissible\": false") != std::string::npos);
}

TEST_CASE("unknown command and unknown potential map to exit 2") {
    RunConfig cfg;
    cfg.command = "frobnicate";
    CHECK(run(cfg) == 2);
    cfg.command = "validate";
    cfg.potential_name = "nope";
    CHECK(run(cfg) == 2);
}

TEST_CASE("numerical failures map to exit 3") {
    TempDir tmp("numfail");
    RunConfig cfg;
    cfg.command = "renorm";
    cfg.potential_name = "barthe-wolff";  // rejected by renormalize
    cfg.out_dir = (tmp.path / "out").string();
    CHECK(run(cfg) == 3);
}

TEST_CASE("clt command: determinism of CSV and SVG bytes, exit 0") {
    TempDir tmp("clt");
    RunConfig cfg;
    cfg.command = "clt";
    cfg.potential_name = "cosine-perturbed";
    cfg.potential_params["beta"] = 1.25;
    cfg.numbers["clt.sigma"] = 0.7;
    cfg.Ks = {4, 16};
    cfg.out_dir = (tmp.path / "a").string();
    CHECK(run(cfg) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out_dir = (tmp.path / "b").string();
    CHECK(run(cfg2) == 0);
    CHECK(slurp((tmp.path / "a" / "clt_error.csv").string()) ==
          slurp((tmp.path / "b" / "clt_error.csv").string()));
    CHECK(slurp((tmp.path / "a" / "clt_error.svg").string()) ==
          slurp((tmp.path / "b" / "clt_error.svg").string()));
    CHECK(!slurp((tmp.path / "a" / "clt_error.csv").string()).empty());
}

TEST_CASE("bw-scaling command produces the sweep and passes its verdicts") {
    TempDir tmp("bw");
    RunConfig cfg;
    cfg.command = "bw-scaling";
    cfg.m_values = {1.0, 2.0};
    cfg.out_dir = (tmp.path / "out").string();
    CHECK(run(cfg) == 0);
    const std::string csv = slurp((tmp.path / "out" / "bw_scaling.csv").string());
    CHECK(csv.find("rho1_times_m2") != std::string::npos);
    CHECK(!slurp((tmp.path / "out" / "bw_scaling.svg").string()).empty());
}

TEST_CASE("report aggregates verdicts and gates the exit code") {
    TempDir tmp("report");
    const std::string out = (tmp.path / "out").string();
    std::filesystem::create_directories(out);
    {
        ReportWriter w(out, 1, 2);
        VerdictRecord ok{"s", "good", 0.5, 1.0, 0.5, true, 1};
        VerdictRecord bad{"s", "bad", 2.0, 1.0, 2.0, false, 1};
        w.write_verdicts("one.ndjson", {ok});
        w.write_verdicts("two.ndjson", {ok, bad});
    }
    RunConfig cfg;
    cfg.command = "report";
    cfg.out_dir = out;
    CHECK(run(cfg) == 1);
    const std::string text = slurp(out + "/report.json");
    CHECK(text.find("\"failed\": 1") != std::string::npos);
    CHECK(text.find("\"verdicts\": 3") != std::string::npos);
}

TEST_CASE("config file parsing with overrides and error paths") {
    TempDir tmp("config");
    const std::string path = (tmp.path / "cfg.json").string();
    {
        std::ofstream out(path);
        out << R"({"command":"clt","potential":"gaussian","seed":99,)"
            << R"("numbers":{"clt.sigma":0.3},"Ks":[4,16]})";
    }
    RunConfig cfg;
    load_config_file(path, cfg);
    CHECK(cfg.command == "clt");
    CHECK(cfg.potential_name == "gaussian");
    CHECK(cfg.seed == 99);
    CHECK(cfg.num("clt.sigma", 0.7) == 0.3);
    CHECK(cfg.Ks == std::vector<int>{4, 16});

    {
        std::ofstream out(path);
        out << R"({"unknown_key": 1})";
    }
    RunConfig cfg2;
    CHECK_THROWS_AS(load_config_file(path, cfg2), Error);
    RunConfig cfg3;
    CHECK_THROWS_AS(load_config_file((tmp.path / "missing.json").string(), cfg3), Error);

    // Tolerance overrides must be positive.
    RunConfig cfg4;
    cfg4.numbers["quad.abs_tol"] = -1.0;
    CHECK_THROWS_AS(cfg4.quad_options(), Error);
}

TEST_CASE("config hash is stable and sensitive to the potential") {
    RunConfig a;
    a.command = "clt";
    RunConfig b = a;
    CHECK(a.hash() == b.hash());
    b.potential_params["beta"] = 0.5;
    CHECK(a.hash() != b.hash());
}

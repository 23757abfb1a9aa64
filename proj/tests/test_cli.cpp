#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mottbox/cli.hpp"
#include "mottbox/render.hpp"

using namespace mottbox;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MOTTBOX_TEST_DATA_DIR;

json load(const std::string& name) {
    std::ifstream in(kData / name);
    return json::parse(in);
}

std::vector<std::uint8_t> file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> file_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> csv_numbers(const std::string& line) {
    std::vector<double> out;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

class Sandbox {
public:
    explicit Sandbox(const std::string& name) : dir_(fs::temp_directory_path() / ("mottbox_cli_" + name)) {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    fs::path sub(const std::string& name) const {
        fs::create_directories(dir_ / name);
        return dir_ / name;
    }

    Run run(const json& config, const fs::path& out_dir, unsigned threads = 1,
            std::optional<std::uint64_t> seed = std::nullopt) const {
        std::ostringstream out, err;
        cli::Overrides o;
        o.out_dir = out_dir;
        o.threads = threads;
        o.seed = seed;
        const int code = cli::run(config, o, out, err);
        return {code, out.str(), err.str()};
    }

private:
    fs::path dir_;
};

}  // namespace

TEST_CASE("bell experiment reproduces -a.b and reports the violation") {
    Sandbox box("bell");
    const auto dir = box.sub("out");
    const auto r = box.run(load("bell.json"), dir);
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.rfind("E=-0.70", 0) == 0);
    CHECK(r.out.find("violated=true") != std::string::npos);

    const auto lines = file_lines(dir / "bell.csv");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "ax,ay,az,bx,by,bz,mean,std_error,n");
    const auto ab = csv_numbers(lines[1]);
    REQUIRE(ab.size() == 9);
    CHECK(ab[8] == 1e6);
    CHECK(std::fabs(ab[6] + std::sqrt(0.5)) < 4.0 * ab[7]);
}

TEST_CASE("validation failures exit with 2 and name the problem") {
    Sandbox box("validation");
    const auto dir = box.sub("out");

    const auto missing = box.run(load("missing_k.json"), dir);
    CHECK(missing.code == cli::kExitValidation);
    CHECK(missing.err.find("'k'") != std::string::npos);

    const auto unknown = box.run(load("unknown.json"), dir);
    CHECK(unknown.code == cli::kExitValidation);
    for (const char* name : {"bell", "scatter", "track", "isotropy", "render"}) {
        CHECK(unknown.err.find(name) != std::string::npos);
    }

    CHECK(box.run(json::object(), dir).code == cli::kExitValidation);
    CHECK(box.run(json::array(), dir).code == cli::kExitValidation);

    auto bad_trials = load("bell.json");
    bad_trials["n_trials"] = -5;
    const auto bt = box.run(bad_trials, dir);
    CHECK(bt.code == cli::kExitValidation);
    CHECK(bt.err.find("n_trials") != std::string::npos);

    auto zero_dir = load("bell.json");
    zero_dir["a"] = {0, 0, 0};
    CHECK(box.run(zero_dir, dir).code == cli::kExitValidation);

    auto low_res = load("render_free.json");
    low_res["plane"]["resolution"] = 8;
    CHECK(box.run(low_res, dir).code == cli::kExitValidation);

    auto close = load("scatter.json");
    close["position"] = {3, 0, 0};
    const auto cl = box.run(close, dir);
    CHECK(cl.code == cli::kExitValidation);
    CHECK(cl.err.find("a/s") != std::string::npos);

    auto few = load("track.json");
    few["experiment"] = "isotropy";
    few["n_configs"] = 10;
    CHECK(box.run(few, dir).code == cli::kExitValidation);

    CHECK(box.run(load("bell.json"), box.sub("out") / "absent").code == cli::kExitValidation);
    // Nothing was written by the rejected runs.
    CHECK(fs::is_empty(dir));
}

TEST_CASE("run_file rejects unreadable and malformed files") {
    std::ostringstream out, err;
    CHECK(cli::run_file(kData / "does_not_exist.json", {}, out, err) == cli::kExitValidation);
    CHECK(cli::run_file(kData / "malformed.json", {}, out, err) == cli::kExitValidation);
    CHECK(err.str().find("malformed.json") != std::string::npos);
}

TEST_CASE("runtime failures exit with 1") {
    Sandbox box("runtime");
    const auto dir = box.sub("out");
    auto cfg = load("scatter.json");
    cfg["outputs"] = {{"csv", "no_such_dir/angular.csv"}};
    const auto r = box.run(cfg, dir);
    CHECK(r.code == cli::kExitRuntime);
    CHECK(r.err.find("no_such_dir") != std::string::npos);
}

TEST_CASE("scatter summary satisfies the flux identity") {
    Sandbox box("scatter");
    const auto dir = box.sub("out");
    const auto r = box.run(load("scatter.json"), dir);
    REQUIRE(r.code == cli::kExitOk);
    double c2 = 0, total = 0, free = 0;
    REQUIRE(std::sscanf(r.out.c_str(), "scatter C2=%lf flux_total=%lf flux_free=%lf", &c2, &total, &free) == 3);
    CHECK(std::fabs(c2 * total / free - 1.0) < 1e-10);
    CHECK(std::fabs(total / 125.673575254487922 - 1.0) < 1e-13);
    const auto lines = file_lines(dir / "angular.csv");
    CHECK(lines.size() == 182);
    CHECK(lines[0] == "theta,re_I0,im_I0,re_I1,im_I1,q");
}

TEST_CASE("render free field matches the golden checksum") {
    Sandbox box("render");
    const auto dir = box.sub("out");
    const auto r = box.run(load("render_free.json"), dir, 2);
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out == "render 64x64 masked=1 C2=1\n");
    CHECK(r.err.find("masked pixel 32 32") != std::string::npos);
    const auto bytes = file_bytes(dir / "field.ppm");
    CHECK(std::string(bytes.begin(), bytes.begin() + 3) == "P6\n");
    CHECK(render::fnv1a64(bytes) == 0x330a3d909a9dd268ULL);

    // Without its comment lines the file is the library's golden free-wave image.
    std::string text(bytes.begin(), bytes.end());
    for (auto pos = text.find("\n#"); pos != std::string::npos; pos = text.find("\n#")) {
        text.erase(pos + 1, text.find('\n', pos + 1) - pos);
    }
    const std::vector<std::uint8_t> stripped(text.begin(), text.end());
    CHECK(render::fnv1a64(stripped) == 0x6d76d50bc2f2bf62ULL);
}

TEST_CASE("render with an obstacle writes the grid CSV") {
    Sandbox box("render_obstacle");
    const auto dir = box.sub("out");
    const auto r = box.run(load("render_obstacle.json"), dir);
    REQUIRE(r.code == cli::kExitOk);
    CHECK(fs::exists(dir / "field.ppm"));
    const auto lines = file_lines(dir / "field.csv");
    CHECK(lines.size() == 1 + 256 * 256);
    CHECK(lines[0] == "i,j,x,y,z,re,im");
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    Sandbox box("determinism");
    const auto cfg = load("track.json");
    const auto a = box.sub("a"), b = box.sub("b"), c = box.sub("c");
    REQUIRE(box.run(cfg, a, 1).code == 0);
    REQUIRE(box.run(cfg, b, 4).code == 0);
    const auto rc = box.run(cfg, c, 1, 8);
    REQUIRE(rc.code == 0);
    for (const char* f : {"gas.json", "track.csv"}) {
        CHECK(file_bytes(a / f) == file_bytes(b / f));
    }
    CHECK(file_bytes(a / "gas.json") != file_bytes(c / "gas.json"));

    // Replaying the stored gas reproduces the track exactly.
    auto replay = cfg;
    replay["gas_file"] = (a / "gas.json").string();
    const auto d = box.sub("d");
    const auto rd = box.run(replay, d);
    REQUIRE(rd.code == 0);
    CHECK(file_bytes(a / "track.csv") == file_bytes(d / "track.csv"));

    auto bell = load("bell.json");
    bell["n_trials"] = 100000;
    const auto e = box.sub("e"), f = box.sub("f");
    const auto re = box.run(bell, e, 1);
    const auto rf = box.run(bell, f, 3);
    CHECK(re.out == rf.out);
    CHECK(file_bytes(e / "bell.csv") == file_bytes(f / "bell.csv"));

    auto iso = load("track.json");
    iso["experiment"] = "isotropy";
    iso["n_configs"] = 200;
    const auto g = box.sub("g"), h = box.sub("h");
    REQUIRE(box.run(iso, g, 1).code == 0);
    REQUIRE(box.run(iso, h, 2).code == 0);
    CHECK(file_bytes(g / "isotropy.csv") == file_bytes(h / "isotropy.csv"));
}

TEST_CASE("track summary format") {
    Sandbox box("track");
    const auto dir = box.sub("out");
    const auto r = box.run(load("track.json"), dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("track N=", 0) == 0);
    CHECK(r.out.find(" flux_ratio=") != std::string::npos);
    CHECK(r.err.find("off_chain_log_c2=") != std::string::npos);

    auto empty = load("track.json");
    empty["density"] = 0;
    const auto re = box.run(empty, dir);
    CHECK(re.code == 0);
    CHECK(re.out == "track none atoms=0\n");
}

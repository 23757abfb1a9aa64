#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "mottbox/error.hpp"
#include "mottbox/io.hpp"

using namespace mottbox;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

chamber::GasConfiguration sampled_gas() {
    chamber::GasParams p;
    p.density = 2e-3;
    p.inner_radius = 10.0;
    p.chamber_radius = 30.0;
    p.atom.width = 0.7;
    p.atom.g0 = 0.31;
    p.atom.g1 = 0.17;
    p.atom.delta_e = 0.013;
    RngStream rng(2718, 4);
    return chamber::sample_gas(p, rng);
}

}  // namespace

TEST_CASE("format_double round-trips bit-exactly") {
    RngStream rng(9, 9);
    for (int i = 0; i < 5000; ++i) {
        const double v = (rng.next_uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.next_uniform() * 40) - 20);
        CHECK(same_bits(std::stod(io::format_double(v)), v));
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("gas configuration JSON round trip is bit-exact") {
    const auto gas = sampled_gas();
    REQUIRE(gas.atoms.size() > 50);
    const auto dir = fs::temp_directory_path() / "mottbox_io_test";
    fs::create_directories(dir);
    io::save_gas(gas, dir / "gas.json");
    const auto back = io::load_gas(dir / "gas.json");
    fs::remove_all(dir);

    CHECK(back.seed == gas.seed);
    CHECK(back.stream == gas.stream);
    CHECK(same_bits(back.inner_radius, gas.inner_radius));
    CHECK(same_bits(back.chamber_radius, gas.chamber_radius));
    REQUIRE(back.atoms.size() == gas.atoms.size());
    for (std::size_t i = 0; i < gas.atoms.size(); ++i) {
        CHECK(same_bits(back.atoms[i].position.x, gas.atoms[i].position.x));
        CHECK(same_bits(back.atoms[i].position.y, gas.atoms[i].position.y));
        CHECK(same_bits(back.atoms[i].position.z, gas.atoms[i].position.z));
        CHECK(same_bits(back.atoms[i].width, gas.atoms[i].width));
        CHECK(same_bits(back.atoms[i].g0, gas.atoms[i].g0));
        CHECK(same_bits(back.atoms[i].g1, gas.atoms[i].g1));
        CHECK(same_bits(back.atoms[i].delta_e, gas.atoms[i].delta_e));
    }

    const auto ctx = mott::ScatteringContext::from_wavenumber(10.0, 0.013);
    const auto t0 = chamber::select_track(gas, ctx);
    const auto t1 = chamber::select_track(back, ctx);
    REQUIRE(t0);
    REQUIRE(t1);
    CHECK(chamber::identical(*t0, *t1));
}

TEST_CASE("gas configuration JSON errors") {
    auto j = io::to_json(sampled_gas());
    CHECK(j.contains("atoms"));
    CHECK(j["atoms"][0].contains("delta_e"));

    auto no_seed = j;
    no_seed.erase("seed");
    no_seed.erase("stream");
    CHECK(io::gas_from_json(no_seed).seed == 0);

    auto bad_seed = j;
    bad_seed["seed"] = -3;
    CHECK_THROWS_WITH_AS(io::gas_from_json(bad_seed), doctest::Contains("seed"), ValidationError);

    auto no_radius = j;
    no_radius.erase("chamber_radius");
    CHECK_THROWS_WITH_AS(io::gas_from_json(no_radius), doctest::Contains("chamber_radius"), ValidationError);

    auto bad_atom = j;
    bad_atom["atoms"][0].erase("g1");
    CHECK_THROWS_WITH_AS(io::gas_from_json(bad_atom), doctest::Contains("g1"), ValidationError);

    auto wrong_type = j;
    wrong_type["inner_radius"] = "ten";
    CHECK_THROWS_AS(io::gas_from_json(wrong_type), ValidationError);

    auto outside = j;
    outside["atoms"][0]["x"] = 1000.0;
    CHECK_THROWS_AS(io::gas_from_json(outside), ValidationError);

    CHECK_THROWS_AS(io::gas_from_json(nlohmann::json::array()), ValidationError);
    CHECK_THROWS_AS(io::load_gas("/nonexistent/gas.json"), ValidationError);
}

TEST_CASE("correlation CSV") {
    std::ostringstream out;
    io::write_correlation_header(out);
    const bell::ApparatusSetting a{UnitVector::z_axis()};
    const bell::ApparatusSetting b{UnitVector::x_axis()};
    io::write_correlation_row(out, a, b, bell::CorrelationEstimate{-0.25, 0.001, 1000});
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "ax,ay,az,bx,by,bz,mean,std_error,n");
    CHECK(lines[1] == "0,0,1,1,0,0,-0.25,0.001,1000");
}

TEST_CASE("angular CSV") {
    const auto ctx = mott::ScatteringContext::from_wavenumber(2.0);
    mott::Obstacle ob;
    ob.position = {10, 0, 0};
    ob.g0 = 0.5;
    ob.g1 = 0.25;
    const std::vector<double> thetas{0.0, 1.0, 3.0};
    const auto t0 = mott::angular_table(ctx, ob, mott::Channel::elastic, thetas);
    const auto t1 = mott::angular_table(ctx, ob, mott::Channel::inelastic, thetas);
    std::ostringstream out;
    io::write_angular_csv(out, t0, t1, ctx.k);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "theta,re_I0,im_I0,re_I1,im_I1,q");
    std::istringstream row(lines[2]);
    std::vector<double> cols;
    for (std::string cell; std::getline(row, cell, ',');) cols.push_back(std::stod(cell));
    REQUIRE(cols.size() == 6);
    CHECK(cols[0] == 1.0);
    CHECK(same_bits(cols[1], t0.values[1].real()));
    CHECK(same_bits(cols[4], t1.values[1].imag()));
    CHECK(same_bits(cols[5], mott::transferred_momentum(2.0, 1.0)));

    const std::vector<double> other{0.0, 1.0};
    const auto short_table = mott::angular_table(ctx, ob, mott::Channel::inelastic, other);
    std::ostringstream sink;
    CHECK_THROWS_AS(io::write_angular_csv(sink, t0, short_table, ctx.k), ValidationError);
}

TEST_CASE("track and isotropy CSV") {
    const auto ctx = mott::ScatteringContext::from_wavenumber(10.0);
    const auto track = chamber::select_track(sampled_gas(), ctx);
    REQUIRE(track);
    std::ostringstream out;
    io::write_track_header(out);
    io::write_track_row(out, *track);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "dx,dy,dz,N,flux_ratio");
    CHECK(lines[1].find("," + std::to_string(track->chain.n()) + ",") != std::string::npos);

    chamber::IsotropyResult iso;
    iso.counts[3] = 7;
    std::ostringstream iso_out;
    io::write_isotropy_csv(iso_out, iso);
    const auto iso_lines = lines_of(iso_out.str());
    REQUIRE(iso_lines.size() == 33);
    CHECK(iso_lines[0] == "bin,z_lo,z_hi,phi_lo,phi_hi,count");
    CHECK(iso_lines[4].substr(0, 2) == "3,");
    CHECK(iso_lines[4].substr(iso_lines[4].size() - 2) == ",7");
}

TEST_CASE("grid CSV") {
    const render::PlaneSpec plane{{0, 0, 1}, UnitVector::x_axis(), UnitVector::y_axis(), 1.0, 16};
    const auto grid = render::sample_plane([](const Vec3& p) { return Complex(p.x, p.y); }, plane);
    std::ostringstream out;
    io::write_grid_csv(out, grid, plane);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 1 + 256);
    CHECK(lines[0] == "i,j,x,y,z,re,im");
    CHECK(lines[1] == "0,0,-1,-1,1,-1,-1");
    CHECK(lines[2].substr(0, 4) == "1,0,");
}

#include "mottbox/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>

#include "mottbox/error.hpp"

namespace mottbox::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const chamber::GasConfiguration& config) {
    json atoms = json::array();
    for (const auto& a : config.atoms) {
        atoms.push_back({{"x", a.position.x},
                         {"y", a.position.y},
                         {"z", a.position.z},
                         {"s", a.width},
                         {"g0", a.g0},
                         {"g1", a.g1},
                         {"delta_e", a.delta_e}});
    }
    return {{"seed", config.seed},
            {"stream", config.stream},
            {"inner_radius", config.inner_radius},
            {"chamber_radius", config.chamber_radius},
            {"atoms", std::move(atoms)}};
}

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("gas configuration: missing key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ValidationError(std::string("gas configuration: key '") + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t optional_u64(const json& j, const char* key) {
    if (!j.contains(key)) return 0;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) {
        throw ValidationError(std::string("gas configuration: key '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

chamber::GasConfiguration gas_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("gas configuration: expected a JSON object");
    chamber::GasConfiguration config;
    config.seed = optional_u64(j, "seed");
    config.stream = optional_u64(j, "stream");
    config.inner_radius = number(j, "inner_radius");
    config.chamber_radius = number(j, "chamber_radius");
    if (!j.contains("atoms") || !j.at("atoms").is_array()) {
        throw ValidationError("gas configuration: missing array 'atoms'");
    }
    for (const auto& a : j.at("atoms")) {
        mott::Obstacle ob;
        ob.position = {number(a, "x"), number(a, "y"), number(a, "z")};
        ob.width = number(a, "s");
        ob.g0 = number(a, "g0");
        ob.g1 = number(a, "g1");
        ob.delta_e = number(a, "delta_e");
        config.atoms.push_back(ob);
    }
    chamber::validate(config);
    return config;
}

void save_gas(const chamber::GasConfiguration& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("save_gas: cannot open " + path.string());
    out << to_json(config).dump(2) << "\n";
    if (!out) throw std::runtime_error("save_gas: write failed for " + path.string());
}

chamber::GasConfiguration load_gas(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_gas: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("load_gas: " + path.string() + ": " + e.what());
    }
    return gas_from_json(j);
}

void write_correlation_header(std::ostream& out) { out << "ax,ay,az,bx,by,bz,mean,std_error,n\n"; }

void write_correlation_row(std::ostream& out, const bell::ApparatusSetting& a, const bell::ApparatusSetting& b,
                           const bell::CorrelationEstimate& est) {
    const auto& u = a.orientation;
    const auto& v = b.orientation;
    out << format_double(u.x()) << ',' << format_double(u.y()) << ',' << format_double(u.z()) << ','
        << format_double(v.x()) << ',' << format_double(v.y()) << ',' << format_double(v.z()) << ','
        << format_double(est.mean) << ',' << format_double(est.std_error) << ',' << est.n_trials << '\n';
}

void write_angular_csv(std::ostream& out, const mott::AngularAmplitude& elastic,
                       const mott::AngularAmplitude& inelastic, double k) {
    if (elastic.theta != inelastic.theta) {
        throw ValidationError("write_angular_csv: channel tables must share their angles");
    }
    out << "theta,re_I0,im_I0,re_I1,im_I1,q\n";
    for (std::size_t i = 0; i < elastic.theta.size(); ++i) {
        const double t = elastic.theta[i];
        out << format_double(t) << ',' << format_double(elastic.values[i].real()) << ','
            << format_double(elastic.values[i].imag()) << ',' << format_double(inelastic.values[i].real()) << ','
            << format_double(inelastic.values[i].imag()) << ',' << format_double(mott::transferred_momentum(k, t))
            << '\n';
    }
}

void write_track_header(std::ostream& out) { out << "dx,dy,dz,N,flux_ratio\n"; }

void write_track_row(std::ostream& out, const chamber::TrackResult& track) {
    out << format_double(track.direction.x()) << ',' << format_double(track.direction.y()) << ','
        << format_double(track.direction.z()) << ',' << track.chain.n() << ',' << format_double(track.flux_ratio)
        << '\n';
}

void write_isotropy_csv(std::ostream& out, const chamber::IsotropyResult& result) {
    out << "bin,z_lo,z_hi,phi_lo,phi_hi,count\n";
    for (int b = 0; b < chamber::kIsotropyBins; ++b) {
        const int band = b / chamber::kPhiSectors;
        const int sector = b % chamber::kPhiSectors;
        const double z_lo = -1.0 + 2.0 * band / chamber::kZBands;
        const double z_hi = -1.0 + 2.0 * (band + 1) / chamber::kZBands;
        const double phi_lo = -std::numbers::pi + 2.0 * std::numbers::pi * sector / chamber::kPhiSectors;
        const double phi_hi = -std::numbers::pi + 2.0 * std::numbers::pi * (sector + 1) / chamber::kPhiSectors;
        out << b << ',' << format_double(z_lo) << ',' << format_double(z_hi) << ',' << format_double(phi_lo) << ','
            << format_double(phi_hi) << ',' << result.counts[static_cast<std::size_t>(b)] << '\n';
    }
}

void write_grid_csv(std::ostream& out, const render::FieldGrid& grid, const render::PlaneSpec& plane) {
    out << "i,j,x,y,z,re,im\n";
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            const Vec3 p = plane.point(i, j);
            const Complex& z = grid.at(i, j);
            out << i << ',' << j << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
                << format_double(p.z) << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
    }
}

}  // namespace mottbox::io

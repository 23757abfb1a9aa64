#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "mottbox/bell.hpp"
#include "mottbox/chamber.hpp"
#include "mottbox/mott.hpp"
#include "mottbox/render.hpp"

// File formats. Doubles in CSV are printed with 17 significant digits so
// they read back bit-exact.
namespace mottbox::io {

// {"seed", "stream", "inner_radius", "chamber_radius",
//  "atoms": [{"x","y","z","s","g0","g1","delta_e"}, ...]}
nlohmann::json to_json(const chamber::GasConfiguration& config);
// "seed" and "stream" default to 0. Throws ValidationError on missing keys,
// wrong types or an invalid configuration.
chamber::GasConfiguration gas_from_json(const nlohmann::json& j);

void save_gas(const chamber::GasConfiguration& config, const std::filesystem::path& path);
chamber::GasConfiguration load_gas(const std::filesystem::path& path);

// ax,ay,az,bx,by,bz,mean,std_error,n
void write_correlation_header(std::ostream& out);
void write_correlation_row(std::ostream& out, const bell::ApparatusSetting& a, const bell::ApparatusSetting& b,
                           const bell::CorrelationEstimate& est);

// theta,re_I0,im_I0,re_I1,im_I1,q. Both tables must share the same angles.
void write_angular_csv(std::ostream& out, const mott::AngularAmplitude& elastic,
                       const mott::AngularAmplitude& inelastic, double k);

// dx,dy,dz,N,flux_ratio
void write_track_header(std::ostream& out);
void write_track_row(std::ostream& out, const chamber::TrackResult& track);

// bin,z_lo,z_hi,phi_lo,phi_hi,count
void write_isotropy_csv(std::ostream& out, const chamber::IsotropyResult& result);

// i,j,x,y,z,re,im
void write_grid_csv(std::ostream& out, const render::FieldGrid& grid, const render::PlaneSpec& plane);

std::string format_double(double v);

}  // namespace mottbox::io

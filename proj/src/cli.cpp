#include "mottbox/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mottbox/bell.hpp"
#include "mottbox/chamber.hpp"
#include "mottbox/error.hpp"
#include "mottbox/io.hpp"
#include "mottbox/mott.hpp"
#include "mottbox/render.hpp"
#include "mottbox/rng.hpp"

namespace mottbox::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kExperiments = "bell, scatter, track, isotropy, render";

// Typed access to the configuration object; every failure is a ValidationError
// naming the key.
class Params {
public:
    explicit Params(const json& j) : j_(j) {}

    bool has(const char* key) const { return j_.contains(key); }

    const json& raw(const char* key) const {
        if (!j_.contains(key)) throw ValidationError(std::string("missing required key '") + key + "'");
        return j_.at(key);
    }

    double number(const char* key) const {
        const auto& v = raw(key);
        if (!v.is_number()) throw ValidationError(std::string("key '") + key + "' must be a number");
        return v.get<double>();
    }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const char* key) const {
        const auto& v = raw(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
        }
        throw ValidationError(std::string("key '") + key + "' must be a non-negative integer");
    }
    std::uint64_t count(const char* key, std::uint64_t fallback) const { return has(key) ? count(key) : fallback; }

    Vec3 vec(const char* key) const {
        const auto& v = raw(key);
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
            throw ValidationError(std::string("key '") + key + "' must be an array of three numbers");
        }
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    UnitVector direction(const char* key) const {
        try {
            return UnitVector(vec(key));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("key '") + key + "': " + e.what());
        }
    }

    std::string string(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ValidationError(std::string("key '") + key + "' must be a string");
        return v.get<std::string>();
    }

    bool flag(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ValidationError(std::string("key '") + key + "' must be true or false");
        return v.get<bool>();
    }

    Params sub(const char* key) const {
        const auto& v = raw(key);
        if (!v.is_object()) throw ValidationError(std::string("key '") + key + "' must be an object");
        return Params(v);
    }

private:
    const json& j_;
};

struct Context {
    fs::path out_dir;
    std::uint64_t seed;
    unsigned threads;
    std::ostream& out;
    std::ostream& err;
};

// Output file names come from the optional "outputs" object.
std::string output_name(const Params& p, const char* kind, const char* fallback) {
    if (!p.has("outputs")) return fallback;
    return p.sub("outputs").string(kind, fallback);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file " + path.string());
    return f;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

mott::Obstacle template_atom(const Params& p) {
    mott::Obstacle atom;
    atom.width = p.number("s");
    atom.g0 = p.number("g0", 0.0);
    atom.g1 = p.number("g1", 0.0);
    atom.delta_e = p.number("delta_e", 0.0);
    mott::validate(atom);
    return atom;
}

mott::ScatteringContext context(const Params& p, double delta_e) {
    return mott::ScatteringContext::from_wavenumber(p.number("k"), delta_e);
}

chamber::GasParams gas_params(const Params& p) {
    chamber::GasParams gas;
    gas.density = p.number("density");
    gas.inner_radius = p.number("inner_radius");
    gas.chamber_radius = p.number("chamber_radius");
    gas.atom = template_atom(p);
    chamber::GasConfiguration shell{{}, gas.chamber_radius, gas.inner_radius, 0, 0};
    chamber::validate(shell);
    if (!(gas.density >= 0.0)) throw ValidationError("key 'density' must be >= 0");
    if (gas.inner_radius < mott::kMinDistanceRatio * gas.atom.width) {
        throw ValidationError("key 'inner_radius' must be >= 10 * s");
    }
    return gas;
}

using Job = std::function<void(const Context&)>;

Job plan_bell(const Params& p) {
    const bell::ApparatusSetting a{p.direction("a")};
    const bell::ApparatusSetting b{p.direction("b")};
    std::optional<bell::ApparatusSetting> c;
    if (p.has("c")) c = bell::ApparatusSetting{p.direction("c")};
    const std::uint64_t n = p.count("n_trials");
    if (n == 0) throw ValidationError("key 'n_trials' must be >= 1");
    const std::string csv = output_name(p, "csv", "bell.csv");

    return [=](const Context& ctx) {
        RngStream rng(ctx.seed, 0);
        auto f = open_output(ctx.out_dir / csv);
        io::write_correlation_header(f);
        std::string summary;
        if (!c) {
            const auto ab = bell::correlation_mc(a, b, n, rng, ctx.threads);
            io::write_correlation_row(f, a, b, ab);
            summary = "E=" + fixed(ab.mean, 4) + "±" + fixed(ab.std_error, 4);
        } else {
            std::vector<bell::CorrelationEstimate> estimates;
            const auto result = bell::bell_test(a, b, *c, [&](const auto& x, const auto& y) {
                estimates.push_back(bell::correlation_mc(x, y, n, rng, ctx.threads));
                io::write_correlation_row(f, x, y, estimates.back());
                return estimates.back().mean;
            });
            summary = "E=" + fixed(estimates.front().mean, 4) + "±" + fixed(estimates.front().std_error, 4) +
                      " bell lhs=" + fixed(result.lhs, 4) + " rhs=" + fixed(result.rhs, 4) +
                      " violated=" + (result.violated ? "true" : "false");
        }
        if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());
        ctx.out << summary << "\n";
    };
}

Job plan_scatter(const Params& p) {
    const double k = p.number("k");
    mott::Obstacle atom = template_atom(p);
    atom.position = p.vec("position");
    const auto sc = context(p, atom.delta_e);
    mott::validate_asymptotic(sc, atom);
    const std::uint64_t n_theta = p.count("n_theta", 181);
    if (n_theta < 2 || n_theta > 1000000) throw ValidationError("key 'n_theta' must lie in [2, 1e6]");
    const std::string csv = output_name(p, "csv", "angular.csv");

    return [=](const Context& ctx) {
        std::vector<double> thetas(n_theta);
        for (std::uint64_t i = 0; i < n_theta; ++i) {
            thetas[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
        }
        const auto i0 = mott::angular_table(sc, atom, mott::Channel::elastic, thetas);
        const auto i1 = mott::angular_table(sc, atom, mott::Channel::inelastic, thetas);
        auto f = open_output(ctx.out_dir / csv);
        io::write_angular_csv(f, i0, i1, k);
        if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());

        const auto ints = mott::angular_integrals(sc, atom);
        if (!ints.converged) ctx.err << "warning: angular integrals not converged at " << ints.nodes << " nodes\n";
        const double total = mott::flux_total(sc, atom);
        const double c2 = mott::normalization_c2(sc, atom);
        ctx.out << "scatter C2=" << io::format_double(c2) << " flux_total=" << io::format_double(total)
                << " flux_free=" << io::format_double(mott::flux_free(sc)) << "\n";
    };
}

Job plan_track(const Params& p) {
    const double cone_level = p.number("cone_level", 0.5);
    std::optional<chamber::GasConfiguration> stored;
    std::optional<chamber::GasParams> gas;
    double delta_e = 0.0;
    double max_width = 0.0;
    if (p.has("gas_file")) {
        stored = io::load_gas(p.string("gas_file", ""));
        for (const auto& atom : stored->atoms) {
            delta_e = std::max(delta_e, atom.delta_e);
            max_width = std::max(max_width, atom.width);
        }
    } else {
        gas = gas_params(p);
        delta_e = gas->atom.delta_e;
        max_width = gas->atom.width;
    }
    const auto sc = context(p, delta_e);
    if (max_width > 0.0) chamber::cone_half_angle(sc, max_width, cone_level);
    const std::string csv = output_name(p, "csv", "track.csv");
    const std::string gas_json = output_name(p, "json", "gas.json");

    return [=](const Context& ctx) {
        chamber::GasConfiguration config;
        if (stored) {
            config = *stored;
        } else {
            RngStream rng(ctx.seed, 0);
            config = chamber::sample_gas(*gas, rng);
        }
        io::save_gas(config, ctx.out_dir / gas_json);
        const auto track = chamber::select_track(config, sc, {cone_level, true});
        auto f = open_output(ctx.out_dir / csv);
        io::write_track_header(f);
        if (!track) {
            if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());
            ctx.out << "track none atoms=0\n";
            return;
        }
        io::write_track_row(f, *track);
        if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());
        ctx.err << "atoms=" << config.atoms.size() << " off_chain_log_c2=" << io::format_double(*track->off_chain_log_c2)
                << "\n";
        ctx.out << "track N=" << track->chain.n() << " flux_ratio=" << fixed(track->flux_ratio, 4) << "\n";
    };
}

Job plan_isotropy(const Params& p) {
    const auto gas = gas_params(p);
    const auto sc = context(p, gas.atom.delta_e);
    chamber::cone_half_angle(sc, gas.atom.width);
    const std::uint64_t n_configs = p.count("n_configs");
    if (n_configs < 100) throw ValidationError("key 'n_configs' must be >= 100");
    const std::string csv = output_name(p, "csv", "isotropy.csv");

    return [=](const Context& ctx) {
        const RngStream rng(ctx.seed, 0);
        const auto result = chamber::isotropy_experiment(n_configs, gas, sc, rng, ctx.threads);
        auto f = open_output(ctx.out_dir / csv);
        io::write_isotropy_csv(f, result);
        if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());
        ctx.out << "isotropy tracks=" << result.n_tracks << " empty=" << result.n_empty
                << " chi2=" << fixed(result.chi_square, 3) << " p=" << fixed(result.p_value, 4) << "\n";
    };
}

Job plan_render(const Params& p) {
    std::optional<mott::Obstacle> atom;
    double delta_e = 0.0;
    if (p.has("position")) {
        atom = template_atom(p);
        atom->position = p.vec("position");
        delta_e = atom->delta_e;
    }
    const auto sc = context(p, delta_e);
    if (atom) mott::validate_asymptotic(sc, *atom);

    const Params pl = p.sub("plane");
    const std::uint64_t res = pl.count("resolution");
    if (res < 16 || res > 8192) throw ValidationError("key 'resolution' must lie in [16, 8192]");
    const render::PlaneSpec plane{pl.has("origin") ? pl.vec("origin") : Vec3{}, pl.direction("u"), pl.direction("v"),
                                  pl.number("half_extent"), static_cast<int>(res)};
    render::validate(plane);
    const double scale = p.number("modulus_scale");
    if (!(scale > 0.0)) throw ValidationError("key 'modulus_scale' must be > 0");
    const bool dump_csv = p.flag("csv", false);
    const std::string ppm = output_name(p, "ppm", "field.ppm");
    const std::string csv = output_name(p, "csv", "field.csv");

    return [=](const Context& ctx) {
        const mott::ElasticField field(sc, atom);
        const auto grid = render::sample_plane(std::cref(field), plane, ctx.threads);
        for (const auto& m : grid.masked) ctx.err << "masked pixel " << m.i << " " << m.j << "\n";
        const auto image = render::colorize(grid, scale);
        const std::vector<std::string> comments{
            "mottbox domain colouring: hue = arg(z) mod 2pi (0 = red), saturation = 1",
            "brightness = min(1, |z| / " + io::format_double(scale) + ")",
            "k = " + io::format_double(sc.k) + ", |C|^2 = " + io::format_double(field.c2())};
        render::write_ppm(image, ctx.out_dir / ppm, comments);
        if (dump_csv) {
            auto f = open_output(ctx.out_dir / csv);
            io::write_grid_csv(f, grid, plane);
            if (!f) throw std::runtime_error("write failed for " + (ctx.out_dir / csv).string());
        }
        ctx.out << "render " << image.width << "x" << image.height << " masked=" << grid.masked.size()
                << " C2=" << io::format_double(field.c2()) << "\n";
    };
}

Job plan(const Params& p) {
    const std::string name = p.string("experiment", "");
    if (!p.has("experiment")) throw ValidationError(std::string("missing required key 'experiment' (valid: ") + kExperiments + ")");
    if (name == "bell") return plan_bell(p);
    if (name == "scatter") return plan_scatter(p);
    if (name == "track") return plan_track(p);
    if (name == "isotropy") return plan_isotropy(p);
    if (name == "render") return plan_render(p);
    throw ValidationError("unknown experiment '" + name + "' (valid: " + kExperiments + ")");
}

}  // namespace

int run(const json& config, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    Job job;
    std::uint64_t seed = 0;
    fs::path out_dir = overrides.out_dir.value_or(".");
    try {
        if (!config.is_object()) throw ValidationError("configuration must be a JSON object");
        const Params params(config);
        seed = overrides.seed.value_or(params.count("seed", 0));
        job = plan(params);
        if (!fs::is_directory(out_dir)) throw ValidationError("output directory does not exist: " + out_dir.string());
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        job(Context{out_dir, seed, overrides.threads, out, err});
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int run_file(const fs::path& config_path, const Overrides& overrides, std::ostream& out, std::ostream& err) {
    std::ifstream in(config_path);
    if (!in) {
        err << "error: cannot open configuration " << config_path.string() << "\n";
        return kExitValidation;
    }
    json config;
    try {
        in >> config;
    } catch (const json::parse_error& e) {
        err << "error: " << config_path.string() << ": " << e.what() << "\n";
        return kExitValidation;
    }
    return run(config, overrides, out, err);
}

}  // namespace mottbox::cli

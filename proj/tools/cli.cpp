// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "cli.hpp"

#include "plos/baselines.hpp"
#include "plos/citygeom.hpp"
#include "plos/error.hpp"
#include "plos/harness.hpp"
#include "plos/sim3d.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plos::cli
{
namespace
{

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Range
{
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;
};

struct Options
{
    std::string env;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> gamma;
    std::string extent = "3000";
    std::string engine = "geom";
    std::optional<std::uint64_t> runs;
    std::uint64_t seed = 0;
    double uav_height = 100.0;
    std::string uav_height_range;
    std::string uav_policy = "random";
    double rx_height = citygeom::kDefaultRxHeight;
    std::string out;
    std::string models;
    int users = 360;
    unsigned workers = 1;
    bool timing = false;
    std::optional<double> theta;
    std::optional<double> phi;
    std::string zone;

    Range theta_grid{5.0, 90.0, 5.0};
    Range radius_grid{50.0, 1000.0, 50.0};
    Range phi_grid{0.0, 90.0, 5.0};
    Range gamma_grid{5.0, 50.0, 5.0};
    Range alpha_grid{0.1, 0.8, 0.1};
    std::vector<double> altitudes{100.0, 200.0, 500.0};
    std::string surface = "gamma-theta";
    std::uint64_t runs_3d = 500;
    std::uint64_t runs_geom = 1000;
};

double parse_double(std::string_view text, std::string_view what)
{
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw UsageError(std::string(what) + ": not a number: '" + std::string(text) + "'");
    return v;
}

std::pair<double, double> parse_pair(const std::string &text, char sep, std::string_view what)
{
    const auto pos = text.find(sep);
    if (pos == std::string::npos)
        throw UsageError(std::string(what) + ": expected two values separated by '" + sep + "'");
    return {parse_double(std::string_view(text).substr(0, pos), what),
            parse_double(std::string_view(text).substr(pos + 1), what)};
}

citygeom::BuiltUpParams resolve_params(const Options &o)
{
    const bool explicit_params = o.alpha || o.beta || o.gamma;
    if (!o.env.empty() && explicit_params)
        throw UsageError("--env cannot be combined with --alpha/--beta/--gamma");
    if (explicit_params)
    {
        if (!o.alpha || !o.beta || !o.gamma)
            throw UsageError("explicit parameters need all of --alpha, --beta and --gamma");
        citygeom::BuiltUpParams p{*o.alpha, *o.beta, *o.gamma};
        try
        {
            citygeom::validate(p);
        }
        catch (const Error &e)
        {
            throw UsageError(e.what());
        }
        return p;
    }
    if (o.env.empty())
        throw UsageError("an environment is required: --env or --alpha/--beta/--gamma");
    if (auto p = citygeom::environment_by_name(o.env))
        return *p;
    throw UsageError("unknown environment '" + o.env + "' (suburban, urban, dense-urban, high-rise, ghent)");
}

std::pair<double, double> resolve_extent(const std::string &text)
{
    const auto pos = text.find('x');
    if (pos == std::string::npos)
    {
        const double e = parse_double(text, "--extent");
        return {e, e};
    }
    return parse_pair(text, 'x', "--extent");
}

sim3d::UavPlacementPolicy resolve_policy(const std::string &text, double h)
{
    if (text == "random")
        return sim3d::RandomOverCity{h};
    if (text == "building-top")
        return sim3d::BuildingTop{h};
    if (text == "crossroad")
        return sim3d::CrossroadCenter{h};
    if (text == "street")
        return sim3d::StreetCenter{h};
    if (text.starts_with("fixed:"))
    {
        const auto [x, y] = parse_pair(text.substr(6), ',', "--uav-policy");
        return sim3d::FixedPoint{{x, y, h}};
    }
    throw UsageError("unknown UAV policy '" + text + "' (random, building-top, crossroad, street, fixed:X,Y)");
}

simgeom::UserZone resolve_zone(const std::string &text)
{
    if (text == "street")
        return simgeom::UserZone::Street;
    if (text == "crossroad")
        return simgeom::UserZone::Crossroad;
    if (text == "freespace")
        return simgeom::UserZone::FreeSpace;
    throw UsageError("unknown zone '" + text + "' (street, crossroad, freespace)");
}

baselines::ModelSet load_models(const Options &o)
{
    if (o.models.empty())
        return {};
    try
    {
        return baselines::load_model_set_file(o.models);
    }
    catch (const Error &e)
    {
        throw UsageError(o.models + ": " + e.what());
    }
}

harness::Engine resolve_engine(const Options &o, const citygeom::BuiltUpParams &params)
{
    if (o.engine == "geom")
        return harness::GeomEngine{};
    if (o.engine == "sim3d")
        return harness::Sim3DEngine{};
    if (o.engine.starts_with("baseline:"))
    {
        const std::string name = o.engine.substr(9);
        const auto models = load_models(o);
        if (auto it = models.find(name); it != models.end())
            return harness::BaselineEngine{name, it->second};
        if (name == "grid_product")
            return harness::BaselineEngine{name, baselines::GridProduct{params}};
        throw UsageError("no baseline model named '" + name + "'" +
                         (o.models.empty() ? std::string(" (no --models file given)") : std::string()));
    }
    throw UsageError("unknown engine '" + o.engine + "' (sim3d, geom, baseline:<name>)");
}

std::vector<double> grid(const Range &r, std::string_view what)
{
    try
    {
        return harness::linear_grid(r.lo, r.hi, r.step);
    }
    catch (const Error &e)
    {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

harness::SweepSpec base_spec(const Options &o)
{
    harness::SweepSpec spec;
    spec.params = resolve_params(o);
    std::tie(spec.extent_x, spec.extent_y) = resolve_extent(o.extent);
    spec.engine = resolve_engine(o, spec.params);
    const bool sim3d = std::holds_alternative<harness::Sim3DEngine>(spec.engine);
    spec.n_runs = o.runs ? *o.runs : (sim3d ? 500 : 1000);
    spec.seed = o.seed;
    spec.h_uav = o.uav_height;
    if (!o.uav_height_range.empty())
    {
        const auto [lo, hi] = parse_pair(o.uav_height_range, ',', "--uav-height-range");
        spec.h_uav_range = simgeom::UniformRange{lo, hi};
    }
    spec.h_rx = o.rx_height;
    spec.policy = resolve_policy(o.uav_policy, o.uav_height);
    spec.users = o.users;
    spec.workers = o.workers;
    if (o.theta)
        spec.theta = *o.theta;
    spec.phi = o.phi;
    if (!o.zone.empty())
        spec.zone = resolve_zone(o.zone);
    return spec;
}

void check_spec(const harness::SweepSpec &spec)
{
    try
    {
        harness::validate(spec);
    }
    catch (const Error &e)
    {
        throw UsageError(e.what());
    }
}

/// Writes to a sibling temporary and renames it over the target.
void write_output(const std::string &path, const std::string &content, std::ostream &out)
{
    if (path.empty())
    {
        out << content;
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f)
        {
            f.close();
            std::filesystem::remove(tmp);
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec)
    {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::IoError, "cannot rename onto " + target.string() + ": " + ec.message());
    }
}

std::string render_sweep(const harness::SweepSpec &spec, bool timing)
{
    const auto result = harness::run_sweep(spec);
    std::ostringstream os;
    harness::write_csv(os, result, timing);
    return os.str();
}

std::string render_compare(const Options &o)
{
    const auto params = resolve_params(o);
    const auto [ex, ey] = resolve_extent(o.extent);
    if (ex != ey)
        throw UsageError("compare needs a square extent");
    const auto thetas = grid(o.theta_grid, "theta grid");
    for (double t : thetas)
        if (!(t > 0.0 && t <= 90.0))
            throw UsageError("compare thetas must lie in (0, 90]");
    if (o.runs_3d == 0 || o.runs_geom == 0)
        throw UsageError("run counts must be at least 1");
    try
    {
        citygeom::derive_layout(params, ex, ey);
    }
    catch (const Error &e)
    {
        throw UsageError(e.what());
    }
    const auto models = load_models(o);
    constexpr double kHeight = 100.0;
    const baselines::GridProduct grid_product{params};

    const auto rows = harness::compare_engines(params, thetas, o.runs_3d, o.runs_geom, o.seed, o.rx_height, ex);

    std::ostringstream os;
    os << "# spec: compare alpha=" << harness::format_number(params.alpha)
       << " beta=" << harness::format_number(params.beta) << " gamma=" << harness::format_number(params.gamma)
       << " extent=" << harness::format_number(ex) << " h_uav=" << harness::format_number(kHeight)
       << " h_rx=" << harness::format_number(o.rx_height) << " n_sim3d=" << o.runs_3d
       << " n_geom=" << o.runs_geom << " seed=" << o.seed << "\n";
    os << "theta,n_sim3d,k_sim3d,p_sim3d,ci_lo_sim3d,ci_hi_sim3d,n_geom,k_geom,p_geom,ci_lo_geom,ci_hi_geom,"
          "abs_delta,grid_product";
    for (const auto &[name, model] : models)
        os << ',' << name;
    os << "\n";
    auto est = [&os](const PLosEstimate &e) {
        os << ',' << e.n << ',' << e.k << ',' << harness::format_probability(e.p_hat) << ','
           << harness::format_probability(e.ci_lo) << ',' << harness::format_probability(e.ci_hi);
    };
    for (const auto &row : rows)
    {
        os << harness::format_number(row.theta);
        est(row.sim3d);
        est(row.geom);
        os << ',' << harness::format_probability(row.abs_delta) << ','
           << harness::format_probability(baselines::evaluate(grid_product, row.theta, kHeight, o.rx_height));
        for (const auto &[name, model] : models)
            os << ',' << harness::format_probability(baselines::evaluate(model, row.theta, kHeight, o.rx_height));
        os << "\n";
    }
    return os.str();
}

std::string render_city(const Options &o)
{
    const auto params = resolve_params(o);
    const auto [ex, ey] = resolve_extent(o.extent);
    sim3d::City city = [&] {
        try
        {
            return sim3d::generate_city(params, ex, ey, o.seed);
        }
        catch (const Error &e)
        {
            throw UsageError(e.what());
        }
    }();
    std::ostringstream os;
    sim3d::write_city(os, city);
    return os.str();
}

void add_range(CLI::App *app, const std::string &name, Range &r, const std::string &unit)
{
    app->add_option("--" + name + "-min", r.lo, "Lowest " + name + " " + unit)->capture_default_str();
    app->add_option("--" + name + "-max", r.hi, "Highest " + name + " " + unit)->capture_default_str();
    app->add_option("--" + name + "-step", r.step, name + " grid step")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    Options o;
    CLI::App app{"Line-of-sight probability experiments for Manhattan-grid cities", "plos"};
    app.set_config("--config", "", "Optional key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    auto *env = app.add_option("--env", o.env, "Named environment: suburban, urban, dense-urban, high-rise, ghent");
    auto *alpha = app.add_option("--alpha", o.alpha, "Built-up area fraction");
    auto *beta = app.add_option("--beta", o.beta, "Buildings per square km");
    auto *gamma = app.add_option("--gamma", o.gamma, "Rayleigh height scale (m)");
    alpha->excludes(env);
    beta->excludes(env);
    gamma->excludes(env);
    app.add_option("--extent", o.extent, "City extent in m, X or XxY")->capture_default_str();
    app.add_option("--engine", o.engine, "sim3d, geom or baseline:<name>")->capture_default_str();
    app.add_option("--runs", o.runs, "Monte-Carlo runs per grid point (default 1000 geom, 500 sim3d)");
    app.add_option("--seed", o.seed, "Master seed")->required();
    app.add_option("--uav-height", o.uav_height, "UAV altitude (m)")->capture_default_str();
    app.add_option("--uav-height-range", o.uav_height_range, "Uniform UAV altitude LO,HI (geom only)");
    app.add_option("--uav-policy", o.uav_policy, "random, building-top, crossroad, street or fixed:X,Y")
        ->capture_default_str();
    app.add_option("--rx-height", o.rx_height, "Receiver height (m)")->capture_default_str();
    app.add_option("--users", o.users, "Receivers per circle (sim3d)")->capture_default_str();
    app.add_option("--theta", o.theta, "Fixed elevation angle when theta is not swept (deg)");
    app.add_option("--phi", o.phi, "Fixed azimuth (geom only, deg); uniform over [0, 90] if unset");
    app.add_option("--zone", o.zone, "Receiver zone for geom: street, crossroad or freespace");
    app.add_option("--out", o.out, "Output file; standard output if omitted");
    app.add_option("--models", o.models, "Baseline model-set file");
    app.add_option("--workers", o.workers, "Parallel grid-point workers")->capture_default_str();
    app.add_flag("--timing", o.timing, "Record wall-clock ms per point (output no longer byte-stable)");

    auto *theta_cmd = app.add_subcommand("plos-vs-theta", "P_LoS over an elevation-angle grid");
    add_range(theta_cmd, "theta", o.theta_grid, "(deg)");

    auto *radius_cmd = app.add_subcommand("plos-vs-radius", "P_LoS over ground distance, one series per altitude");
    add_range(radius_cmd, "radius", o.radius_grid, "(m)");
    radius_cmd->add_option("--altitudes", o.altitudes, "UAV altitude series (m)")->delimiter(',')->capture_default_str();

    auto *heat_cmd = app.add_subcommand("heatmap", "P_LoS over elevation x azimuth (geom engine)");
    add_range(heat_cmd, "theta", o.theta_grid, "(deg)");
    add_range(heat_cmd, "phi", o.phi_grid, "(deg)");

    auto *surface_cmd = app.add_subcommand("param-surface", "P_LoS over gamma x theta or alpha x gamma");
    surface_cmd->add_option("--surface", o.surface, "gamma-theta or alpha-gamma")
        ->check(CLI::IsMember({"gamma-theta", "alpha-gamma"}))
        ->capture_default_str();
    add_range(surface_cmd, "gamma", o.gamma_grid, "(m)");
    add_range(surface_cmd, "theta", o.theta_grid, "(deg)");
    add_range(surface_cmd, "alpha", o.alpha_grid, "");

    auto *city_cmd = app.add_subcommand("export-city", "Write one generated city to a text file");

    auto *compare_cmd = app.add_subcommand("compare", "Both engines side by side with baseline models");
    add_range(compare_cmd, "theta", o.theta_grid, "(deg)");
    compare_cmd->add_option("--runs-3d", o.runs_3d, "sim3d runs per angle")->capture_default_str();
    compare_cmd->add_option("--runs-geom", o.runs_geom, "geom runs per angle")->capture_default_str();

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("plos");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        err << "plos: " << e.what() << "\n";
        return kExitUsage;
    }

    std::string content;
    try
    {
        if (city_cmd->parsed())
            content = render_city(o);
        else if (compare_cmd->parsed())
            content = render_compare(o);
        else
        {
            auto spec = base_spec(o);
            if (theta_cmd->parsed())
            {
                spec.axes = {{harness::Variable::Theta, grid(o.theta_grid, "theta grid")}};
            }
            else if (radius_cmd->parsed())
            {
                spec.axes = {{harness::Variable::HUav, o.altitudes},
                             {harness::Variable::Radius, grid(o.radius_grid, "radius grid")}};
            }
            else if (heat_cmd->parsed())
            {
                if (o.zone.empty())
                    spec.zone = simgeom::UserZone::Street;
                spec.axes = {{harness::Variable::Theta, grid(o.theta_grid, "theta grid")},
                             {harness::Variable::Phi, grid(o.phi_grid, "phi grid")}};
            }
            else if (surface_cmd->parsed())
            {
                if (o.surface == "gamma-theta")
                    spec.axes = {{harness::Variable::Gamma, grid(o.gamma_grid, "gamma grid")},
                                 {harness::Variable::Theta, grid(o.theta_grid, "theta grid")}};
                else
                    spec.axes = {{harness::Variable::Alpha, grid(o.alpha_grid, "alpha grid")},
                                 {harness::Variable::Gamma, grid(o.gamma_grid, "gamma grid")}};
            }
            check_spec(spec);
            content = render_sweep(spec, o.timing);
        }
    }
    catch (const UsageError &e)
    {
        err << "plos: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        err << "plos: " << e.what() << "\n";
        return kExitRuntime;
    }

    try
    {
        write_output(o.out, content, out);
    }
    catch (const std::exception &e)
    {
        err << "plos: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace plos::cli

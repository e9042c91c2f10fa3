// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/harness.hpp"

#include "plos/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace plos::harness
{

namespace
{

constexpr std::array<std::pair<Variable, std::string_view>, 6> kNames{{
    {Variable::Theta, "theta"},
    {Variable::Phi, "phi"},
    {Variable::Radius, "radius"},
    {Variable::HUav, "h_uav"},
    {Variable::Gamma, "gamma"},
    {Variable::Alpha, "alpha"},
}};

[[noreturn]] void illegal(const std::string &why) { throw Error(ErrorCode::IllegalSpec, why); }

bool has_axis(const SweepSpec &spec, Variable v)
{
    return std::any_of(spec.axes.begin(), spec.axes.end(), [v](const Axis &a) { return a.variable == v; });
}

std::string_view zone_name(simgeom::UserZone z)
{
    switch (z)
    {
    case simgeom::UserZone::Street: return "street";
    case simgeom::UserZone::Crossroad: return "crossroad";
    case simgeom::UserZone::FreeSpace: return "freespace";
    }
    return "?";
}

std::string policy_name(const sim3d::UavPlacementPolicy &p)
{
    if (const auto *f = std::get_if<sim3d::FixedPoint>(&p))
        return "fixed(" + format_number(f->node.x) + "," + format_number(f->node.y) + ")";
    switch (p.index())
    {
    case 1: return "random";
    case 2: return "building-top";
    case 3: return "crossroad";
    default: return "street";
    }
}

/// Resolved values at one grid point.
struct Point
{
    citygeom::BuiltUpParams params;
    double theta = 0.0;
    std::optional<double> phi;
    double h_uav = 0.0;
};

Point resolve(const SweepSpec &spec, std::span<const double> values)
{
    Point pt{spec.params, spec.theta, spec.phi, spec.h_uav};
    std::optional<double> radius;
    for (std::size_t i = 0; i < spec.axes.size(); ++i)
    {
        const double v = values[i];
        switch (spec.axes[i].variable)
        {
        case Variable::Theta: pt.theta = v; break;
        case Variable::Phi: pt.phi = v; break;
        case Variable::Radius: radius = v; break;
        case Variable::HUav: pt.h_uav = v; break;
        case Variable::Gamma: pt.params.gamma = v; break;
        case Variable::Alpha: pt.params.alpha = v; break;
        }
    }
    if (radius)
        pt.theta = *radius == 0.0 ? 90.0 : std::atan2(pt.h_uav - spec.h_rx, *radius) * 180.0 / std::numbers::pi;
    return pt;
}

PLosEstimate evaluate_point(const SweepSpec &spec, const Point &pt)
{
    if (std::holds_alternative<GeomEngine>(spec.engine))
    {
        simgeom::GeomScenario sc;
        sc.params = pt.params;
        sc.zone = spec.zone;
        sc.theta = pt.theta;
        if (pt.phi)
            sc.phi = simgeom::Fixed{*pt.phi};
        else
            sc.phi = simgeom::UniformRange{0.0, 90.0};
        if (spec.h_uav_range)
            sc.h_uav = *spec.h_uav_range;
        else
            sc.h_uav = simgeom::Fixed{pt.h_uav};
        sc.h_rx = spec.h_rx;
        return simgeom::estimate_plos(sc, spec.n_runs, spec.seed);
    }
    if (std::holds_alternative<Sim3DEngine>(spec.engine))
    {
        sim3d::CircleProtocol proto;
        proto.params = pt.params;
        proto.extent_x = spec.extent_x;
        proto.extent_y = spec.extent_y;
        proto.policy = sim3d::with_height(spec.policy, pt.h_uav);
        proto.theta = pt.theta;
        proto.users = spec.users;
        proto.h_rx = spec.h_rx;
        return sim3d::run_circle_protocol(proto, spec.n_runs, spec.seed).estimate;
    }
    auto model = std::get<BaselineEngine>(spec.engine).model;
    if (auto *g = std::get_if<baselines::GridProduct>(&model))
    {
        if (has_axis(spec, Variable::Gamma))
            g->params.gamma = pt.params.gamma;
        if (has_axis(spec, Variable::Alpha))
            g->params.alpha = pt.params.alpha;
    }
    return PLosEstimate::exact(baselines::evaluate(model, pt.theta, pt.h_uav, spec.h_rx));
}

void check_value(const SweepSpec &spec, Variable v, double x)
{
    const std::string name(to_string(v));
    const auto bad = [&](const char *what) { illegal(name + " value " + format_number(x) + " " + what); };
    if (!std::isfinite(x))
        bad("is not finite");
    switch (v)
    {
    case Variable::Theta:
        if (!(x > 0.0 && x <= 90.0))
            bad("outside (0, 90]");
        break;
    case Variable::Phi:
        if (!(x >= 0.0 && x <= 90.0))
            bad("outside [0, 90]");
        break;
    case Variable::Radius:
        if (!(x >= 0.0))
            bad("is negative");
        break;
    case Variable::HUav:
        if (!(x > spec.h_rx))
            bad("does not exceed the receiver height");
        break;
    case Variable::Gamma:
        if (!(x > 0.0))
            bad("is not positive");
        break;
    case Variable::Alpha:
        if (!(x > 0.0 && x < 1.0))
            bad("outside (0, 1)");
        break;
    }
}

} // namespace

std::string_view to_string(Variable v)
{
    for (const auto &[var, name] : kNames)
        if (var == v)
            return name;
    return "?";
}

std::optional<Variable> variable_from_string(std::string_view name)
{
    for (const auto &[var, n] : kNames)
        if (n == name)
            return var;
    return std::nullopt;
}

std::vector<double> linear_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::IllegalSpec, "grid needs lo <= hi and a positive step");
    std::vector<double> out;
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= count; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_probability(double p)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

void validate(const SweepSpec &spec)
{
    if (spec.axes.empty() || spec.axes.size() > 2)
        illegal("a sweep needs one or two axes");
    if (spec.axes.size() == 2 && spec.axes[0].variable == spec.axes[1].variable)
        illegal("the two axes must sweep different variables");
    if (spec.n_runs == 0)
        illegal("n_runs must be at least 1");
    if (has_axis(spec, Variable::Theta) && has_axis(spec, Variable::Radius))
        illegal("theta and radius cannot both be swept; radius determines theta");
    try
    {
        citygeom::derive_layout(spec.params, spec.extent_x, spec.extent_y);
    }
    catch (const Error &e)
    {
        illegal(std::string("environment rejected: ") + e.what());
    }
    if (!(spec.h_rx >= 0.0))
        illegal("receiver height must be non-negative");

    const bool geom = std::holds_alternative<GeomEngine>(spec.engine);
    const bool sim3d = std::holds_alternative<Sim3DEngine>(spec.engine);
    if (!geom)
    {
        if (has_axis(spec, Variable::Phi) || spec.phi)
            illegal("azimuth control requires the geom engine; sim3d uses full receiver circles");
        if (spec.zone != simgeom::UserZone::FreeSpace)
            illegal("user zones require the geom engine");
        if (spec.h_uav_range)
            illegal("a UAV altitude range requires the geom engine");
    }
    else if (spec.h_uav_range)
    {
        if (has_axis(spec, Variable::Radius) || has_axis(spec, Variable::HUav))
            illegal("radius and h_uav sweeps need a fixed UAV altitude");
    }
    if (sim3d && spec.users < 1)
        illegal("sim3d needs at least one receiver per circle");

    for (const auto &axis : spec.axes)
    {
        if (axis.values.empty())
            illegal(std::string(to_string(axis.variable)) + " axis is empty");
        for (double v : axis.values)
            check_value(spec, axis.variable, v);
    }
    if (!has_axis(spec, Variable::Theta) && !has_axis(spec, Variable::Radius))
        check_value(spec, Variable::Theta, spec.theta);
    if (spec.phi)
        check_value(spec, Variable::Phi, *spec.phi);
    if (!has_axis(spec, Variable::HUav) && !spec.h_uav_range)
        check_value(spec, Variable::HUav, spec.h_uav);
    if (const auto *b = std::get_if<BaselineEngine>(&spec.engine))
    {
        try
        {
            baselines::validate(b->model);
        }
        catch (const Error &e)
        {
            illegal("baseline '" + b->name + "' rejected: " + e.what());
        }
    }
    // Alpha sweeps change the layout; every value must still give a street.
    if (has_axis(spec, Variable::Alpha))
        for (const auto &axis : spec.axes)
            if (axis.variable == Variable::Alpha)
                for (double a : axis.values)
                {
                    auto p = spec.params;
                    p.alpha = a;
                    try
                    {
                        citygeom::derive_layout(p, spec.extent_x, spec.extent_y);
                    }
                    catch (const Error &e)
                    {
                        illegal(std::string("alpha sweep: ") + e.what());
                    }
                }
}

std::string canonical_echo(const SweepSpec &spec)
{
    std::ostringstream os;
    if (std::holds_alternative<GeomEngine>(spec.engine))
        os << "engine=geom";
    else if (std::holds_alternative<Sim3DEngine>(spec.engine))
        os << "engine=sim3d";
    else
    {
        const auto &b = std::get<BaselineEngine>(spec.engine);
        os << "engine=baseline:" << b.name << " family=" << baselines::family_name(b.model);
    }
    os << " alpha=" << format_number(spec.params.alpha) << " beta=" << format_number(spec.params.beta)
       << " gamma=" << format_number(spec.params.gamma) << " extent=" << format_number(spec.extent_x) << "x"
       << format_number(spec.extent_y);
    for (const auto &axis : spec.axes)
    {
        os << " axis:" << to_string(axis.variable) << "=";
        for (std::size_t i = 0; i < axis.values.size(); ++i)
            os << (i ? ";" : "") << format_number(axis.values[i]);
    }
    os << " theta=" << format_number(spec.theta) << " phi=" << (spec.phi ? format_number(*spec.phi) : "uniform(0,90)");
    if (spec.h_uav_range)
        os << " h_uav=uniform(" << format_number(spec.h_uav_range->lo) << "," << format_number(spec.h_uav_range->hi)
           << ")";
    else
        os << " h_uav=" << format_number(spec.h_uav);
    os << " h_rx=" << format_number(spec.h_rx) << " zone=" << zone_name(spec.zone)
       << " policy=" << policy_name(spec.policy) << " users=" << spec.users << " runs=" << spec.n_runs
       << " seed=" << spec.seed;
    return os.str();
}

SweepResult run_sweep(const SweepSpec &spec)
{
    validate(spec);
    SweepResult result;
    result.spec_echo = canonical_echo(spec);
    for (const auto &axis : spec.axes)
        result.axes.push_back(axis.variable);

    std::vector<std::vector<double>> points;
    if (spec.axes.size() == 1)
        for (double a : spec.axes[0].values)
            points.push_back({a});
    else
        for (double a : spec.axes[0].values)
            for (double b : spec.axes[1].values)
                points.push_back({a, b});

    result.rows.resize(points.size());
    const auto work = [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const auto est = evaluate_point(spec, resolve(spec, points[i]));
        const auto stop = std::chrono::steady_clock::now();
        result.rows[i] = {points[i], est, std::chrono::duration<double, std::milli>(stop - start).count()};
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, static_cast<unsigned>(points.size())));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < points.size(); ++i)
            work(i);
        return result;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try
                {
                    for (std::size_t i = w; i < points.size(); i += workers)
                        work(i);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return result;
}

void write_csv(std::ostream &os, const SweepResult &result, bool timing)
{
    os << "# spec: " << result.spec_echo << '\n';
    for (const auto v : result.axes)
        os << to_string(v) << ',';
    os << "n,k,p_hat,ci_lo,ci_hi,ms_per_point\n";
    char ms[32];
    for (const auto &row : result.rows)
    {
        for (double v : row.axis_values)
            os << format_number(v) << ',';
        const auto &e = row.estimate;
        std::snprintf(ms, sizeof ms, "%.3f", timing ? row.ms_per_point : 0.0);
        os << e.n << ',' << e.k << ',' << format_probability(e.p_hat) << ',' << format_probability(e.ci_lo) << ','
           << format_probability(e.ci_hi) << ',' << ms << '\n';
    }
}

std::vector<EngineComparison> compare_engines(const citygeom::BuiltUpParams &env, std::span<const double> thetas,
                                              std::uint64_t n3d, std::uint64_t ngeom, std::uint64_t seed,
                                              double h_rx, double extent)
{
    if (thetas.empty())
        illegal("compare_engines needs at least one theta");
    SweepSpec base;
    base.params = env;
    base.extent_x = extent;
    base.extent_y = extent;
    base.axes = {{Variable::Theta, {thetas.begin(), thetas.end()}}};
    base.h_uav = 100.0;
    base.h_rx = h_rx;
    base.seed = seed;

    SweepSpec s3 = base;
    s3.engine = Sim3DEngine{};
    s3.policy = sim3d::RandomOverCity{100.0};
    s3.users = 360;
    s3.n_runs = n3d;
    SweepSpec sg = base;
    sg.engine = GeomEngine{};
    sg.zone = simgeom::UserZone::FreeSpace;
    sg.n_runs = ngeom;

    const auto r3 = run_sweep(s3);
    const auto rg = run_sweep(sg);
    std::vector<EngineComparison> out;
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
        const auto &a = r3.rows[i].estimate;
        const auto &b = rg.rows[i].estimate;
        out.push_back({thetas[i], a, b, std::abs(a.p_hat - b.p_hat)});
    }
    return out;
}

} // namespace plos::harness

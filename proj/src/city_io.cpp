// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/error.hpp"
#include "plos/sim3d.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace plos::sim3d
{

namespace
{

constexpr std::string_view kMagic = "# plos-city";

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T> T parse_number(std::string_view text, std::size_t line, const std::string &field)
{
    T value{};
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ParseError(line, field, "expected a number, got '" + std::string(text) + "'");
    return value;
}

} // namespace

void write_city(std::ostream &os, const City &city)
{
    const auto &p = city.params();
    const auto &l = city.layout();
    os << kMagic << " alpha=" << shortest(p.alpha) << " beta=" << shortest(p.beta) << " gamma=" << shortest(p.gamma)
       << " extent_x=" << shortest(l.extent_x) << " extent_y=" << shortest(l.extent_y) << " seed=" << city.seed()
       << " nx=" << city.nx() << " ny=" << city.ny() << '\n';
    for (int iy = 1; iy <= city.ny(); ++iy)
        for (int ix = 1; ix <= city.nx(); ++ix)
            os << ix << ' ' << iy << ' ' << shortest(city.height(ix, iy)) << '\n';
}

City read_city(std::istream &is)
{
    std::string header;
    if (!std::getline(is, header) || header.rfind(kMagic, 0) != 0)
        throw ParseError(1, "", "missing '# plos-city' header");

    std::map<std::string, std::string> fields;
    std::istringstream hs(header.substr(kMagic.size()));
    for (std::string tok; hs >> tok;)
    {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError(1, tok, "expected key=value");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    const auto get = [&](const std::string &key) -> std::string_view {
        const auto it = fields.find(key);
        if (it == fields.end())
            throw ParseError(1, key, "missing header field");
        return it->second;
    };

    const citygeom::BuiltUpParams params{parse_number<double>(get("alpha"), 1, "alpha"),
                                         parse_number<double>(get("beta"), 1, "beta"),
                                         parse_number<double>(get("gamma"), 1, "gamma")};
    const double ex = parse_number<double>(get("extent_x"), 1, "extent_x");
    const double ey = parse_number<double>(get("extent_y"), 1, "extent_y");
    const auto seed = parse_number<std::uint64_t>(get("seed"), 1, "seed");
    const int nx = parse_number<int>(get("nx"), 1, "nx");
    const int ny = parse_number<int>(get("ny"), 1, "ny");

    CityLayout layout;
    try
    {
        layout = citygeom::derive_layout(params, ex, ey);
    }
    catch (const Error &e)
    {
        throw ParseError(1, "", e.what());
    }

    std::vector<double> heights(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), -1.0);
    std::size_t line_no = 1;
    std::size_t seen = 0;
    for (std::string line; std::getline(is, line);)
    {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string sx, sy, sh, extra;
        if (!(ls >> sx >> sy >> sh) || (ls >> extra))
            throw ParseError(line_no, "", "expected 'ix iy height_m'");
        const int ix = parse_number<int>(sx, line_no, "ix");
        const int iy = parse_number<int>(sy, line_no, "iy");
        const double h = parse_number<double>(sh, line_no, "height_m");
        if (ix < 1 || iy < 1 || ix > nx || iy > ny)
            throw ParseError(line_no, "ix", "building index outside the grid");
        auto &slot = heights[static_cast<std::size_t>(iy - 1) * nx + (ix - 1)];
        if (slot >= 0.0)
            throw ParseError(line_no, "ix", "duplicate building");
        if (!(h >= 0.0))
            throw ParseError(line_no, "height_m", "height must be non-negative");
        slot = h;
        ++seen;
    }
    if (seen != heights.size())
        throw ParseError(0, "", "expected " + std::to_string(heights.size()) + " buildings, found " +
                                    std::to_string(seen));
    try
    {
        City city(params, layout, seed, std::move(heights));
        if (city.nx() != nx || city.ny() != ny)
            throw ParseError(1, "nx", "grid size does not match the extent");
        return city;
    }
    catch (const ParseError &)
    {
        throw;
    }
    catch (const Error &e)
    {
        throw ParseError(0, "", e.what());
    }
}

} // namespace plos::sim3d

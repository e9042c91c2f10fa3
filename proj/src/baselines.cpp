// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#include "plos/baselines.hpp"

#include "plos/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace plos::baselines
{

std::string_view family_name(const BaselineModel &model)
{
    switch (model.index())
    {
    case 0: return "grid";
    case 1: return "sigmoid";
    default: return "step";
    }
}

void validate(const BaselineModel &model)
{
    if (const auto *g = std::get_if<GridProduct>(&model))
    {
        citygeom::validate(g->params);
        return;
    }
    if (const auto *s = std::get_if<Sigmoid>(&model))
    {
        if (!(s->a > 0.0 && s->b > 0.0) || !std::isfinite(s->a) || !std::isfinite(s->b))
            throw Error(ErrorCode::InvalidParams, "sigmoid needs positive a and b");
        return;
    }
    const auto &t = std::get<StepTable>(model);
    if (t.rows.empty())
        throw Error(ErrorCode::EmptyTable, "step table has no rows");
    double expect = 0.0;
    for (const auto &row : t.rows)
    {
        if (row.theta_lo != expect || !(row.theta_hi > row.theta_lo))
            throw Error(ErrorCode::InvalidParams, "step rows must tile [0, 90] in increasing order");
        if (!(row.p >= 0.0 && row.p <= 1.0))
            throw Error(ErrorCode::InvalidParams, "step probabilities must lie in [0, 1]");
        expect = row.theta_hi;
    }
    if (expect != 90.0)
        throw Error(ErrorCode::InvalidParams, "step rows must end at 90 degrees");
}

namespace
{

double grid_product(const GridProduct &g, double theta, double h_uav, double h_rx)
{
    citygeom::validate(g.params);
    if (!(h_uav > h_rx) || !(h_rx >= 0.0))
        throw Error(ErrorCode::InvalidParams, "grid model needs h_uav > h_rx >= 0");
    if (theta == 0.0)
        return 0.0; // unbounded ground distance
    const double r = theta == 90.0 ? 0.0 : (h_uav - h_rx) / std::tan(theta * std::numbers::pi / 180.0);
    const double m = std::floor(r * std::sqrt(g.params.alpha * g.params.beta) / 1000.0);
    const double two_g2 = 2.0 * g.params.gamma * g.params.gamma;
    double prob = 1.0;
    for (double n = 0.0; n <= m; n += 1.0)
    {
        const double h = h_uav - (n + 0.5) * (h_uav - h_rx) / (m + 1.0);
        prob *= -std::expm1(-h * h / two_g2);
        if (prob < 1e-300)
            return 0.0;
    }
    return prob;
}

} // namespace

double evaluate(const BaselineModel &model, double theta, double h_uav, double h_rx)
{
    if (!(theta >= 0.0 && theta <= 90.0))
        throw Error(ErrorCode::InvalidAngle, "theta must lie in [0, 90]");
    if (const auto *g = std::get_if<GridProduct>(&model))
        return grid_product(*g, theta, h_uav, h_rx);
    if (const auto *s = std::get_if<Sigmoid>(&model))
        return 1.0 / (1.0 + s->a * std::exp(-s->b * (theta - s->a)));
    const auto &t = std::get<StepTable>(model);
    if (t.rows.empty())
        throw Error(ErrorCode::EmptyTable, "step table has no rows");
    for (const auto &row : t.rows)
        if (theta >= row.theta_lo && theta < row.theta_hi)
            return row.p;
    if (theta == t.rows.back().theta_hi)
        return t.rows.back().p;
    throw Error(ErrorCode::InvalidAngle, "theta not covered by the step table");
}

namespace
{

double parse_double(std::string_view text, std::size_t line, const std::string &field)
{
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        throw ParseError(line, field, "expected a number, got '" + std::string(text) + "'");
    return v;
}

StepRow parse_row(std::string_view text, std::size_t line)
{
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw ParseError(line, "row", "expected lo:hi:p");
    return {parse_double(text.substr(0, c1), line, "row"), parse_double(text.substr(c1 + 1, c2 - c1 - 1), line, "row"),
            parse_double(text.substr(c2 + 1), line, "row")};
}

BaselineModel parse_record(const std::string &family, const std::vector<std::pair<std::string, std::string>> &kv,
                           std::size_t line)
{
    const auto allowed = [&](std::initializer_list<std::string_view> keys) {
        std::set<std::string> seen;
        for (const auto &[k, v] : kv)
        {
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw ParseError(line, k, "unknown key for family '" + family + "'");
            if (k != "row" && !seen.insert(k).second)
                throw ParseError(line, k, "duplicate key");
        }
    };
    const auto required = [&](const std::string &key) -> double {
        for (const auto &[k, v] : kv)
            if (k == key)
                return parse_double(v, line, key);
        throw ParseError(line, key, "missing key");
    };

    BaselineModel model;
    if (family == "grid")
    {
        allowed({"alpha", "beta", "gamma"});
        model = GridProduct{{required("alpha"), required("beta"), required("gamma")}};
    }
    else if (family == "sigmoid")
    {
        allowed({"a", "b"});
        model = Sigmoid{required("a"), required("b")};
    }
    else if (family == "step")
    {
        allowed({"row"});
        StepTable table;
        for (const auto &[k, v] : kv)
            table.rows.push_back(parse_row(v, line));
        model = std::move(table);
    }
    else
    {
        throw ParseError(line, "family", "unknown model family '" + family + "'");
    }
    try
    {
        validate(model);
    }
    catch (const Error &e)
    {
        throw ParseError(line, "", e.what());
    }
    return model;
}

} // namespace

ModelSet load_model_set(std::istream &is)
{
    ModelSet models;
    std::size_t line_no = 0;
    for (std::string line; std::getline(is, line);)
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string name, family;
        if (!(ls >> name))
            continue;
        if (!(ls >> family))
            throw ParseError(line_no, "family", "missing model family");
        std::vector<std::pair<std::string, std::string>> kv;
        for (std::string tok; ls >> tok;)
        {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError(line_no, tok, "expected key=value");
            kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
        if (models.contains(name))
            throw ParseError(line_no, "name", "duplicate model name '" + name + "'");
        models.emplace(name, parse_record(family, kv, line_no));
    }
    return models;
}

ModelSet load_model_set(std::string_view text)
{
    std::istringstream is{std::string(text)};
    return load_model_set(is);
}

ModelSet load_model_set_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open model file '" + path + "'");
    return load_model_set(in);
}

} // namespace plos::baselines

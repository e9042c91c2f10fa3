// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities
//
// Reference P_LoS model families. Coefficients are data: load them from a
// model-set file rather than hard-coding a particular published fit.

#pragma once

#include "plos/citygeom.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace plos::baselines
{

/// Product over the m + 1 buildings crossed at ground distance
/// r = (h_uav - h_rx) / tan(theta), m = floor(r * sqrt(alpha * beta) / 1000),
/// of the probability that a Rayleigh building stays below the ray.
struct GridProduct
{
    citygeom::BuiltUpParams params;
};

/// 1 / (1 + a * exp(-b * (theta - a))), theta in degrees.
struct Sigmoid
{
    double a = 0.0;
    double b = 0.0;
};

/// Row covers [theta_lo, theta_hi); the last row also covers its upper bound.
struct StepRow
{
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double p = 0.0;
};

struct StepTable
{
    std::vector<StepRow> rows;
};

using BaselineModel = std::variant<GridProduct, Sigmoid, StepTable>;

std::string_view family_name(const BaselineModel &model);

/// Throws Error(InvalidParams) for coefficients outside the family's domain
/// and Error(EmptyTable) for a step table without rows.
void validate(const BaselineModel &model);

double evaluate(const BaselineModel &model, double theta, double h_uav, double h_rx);

using ModelSet = std::map<std::string, BaselineModel, std::less<>>;

/// Line-oriented records `name family key=value ...`; `#` starts a comment.
///   grid    alpha= beta= gamma=
///   sigmoid a= b=
///   step    row=lo:hi:p (repeated, rows must tile [0, 90])
ModelSet load_model_set(std::istream &is);
ModelSet load_model_set(std::string_view text);
ModelSet load_model_set_file(const std::string &path);

} // namespace plos::baselines

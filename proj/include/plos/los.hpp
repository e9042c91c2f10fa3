// SPDX-License-Identifier: Apache-2.0
//
// plos - line-of-sight probability simulators for Manhattan-grid cities

#pragma once

#include "plos/citygeom.hpp"

#include <optional>

namespace plos
{

enum class LinkState
{
    LoS,
    NLoS,
};

/// First obstructing building: its indices and the horizontal distance from
/// the transmitter to the obstruction point.
struct Blocker
{
    int ix = 0;
    int iy = 0;
    double r_op = 0.0;

    bool operator==(const Blocker &) const = default;
};

struct LoSOutcome
{
    LinkState state = LinkState::LoS;
    std::optional<Blocker> blocker; // set iff state == NLoS

    static LoSOutcome los() { return {}; }
    static LoSOutcome nlos(const Blocker &b) { return {LinkState::NLoS, b}; }

    bool is_los() const { return state == LinkState::LoS; }
};

/// Height of the tx->rx ray at horizontal distance r_op from the transmitter.
/// Throws Error(DegenerateLink) for vertical links.
double ray_height_at(const citygeom::LinkGeometry &link, double r_op);

} // namespace plos

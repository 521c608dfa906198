#pragma once

#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "dmkit/errors.hpp"

namespace dmkit {

using Rational = boost::rational<long long>;

long long rational_floor(const Rational& r);
long long rational_ceil(const Rational& r);

/// A convex piecewise-linear function through integer vertices, on an
/// arbitrary integer interval. This is the raw result of a lower convex
/// hull; Newton polygons are the normalized special case on [0, h].
class PiecewiseLinear {
public:
    /// Lower convex hull of the finite points; points with y = nullopt are
    /// skipped. The leftmost and rightmost finite points become endpoints.
    static PiecewiseLinear hull(
        const std::vector<std::pair<long long, std::optional<long long>>>& points);

    const std::vector<std::pair<long long, long long>>& vertices() const {
        return vertices_;
    }
    long long x_min() const { return vertices_.front().first; }
    long long x_max() const { return vertices_.back().first; }

    Rational evaluate(const Rational& t) const;
    bool is_vertex(long long x) const;

    /// Shift the domain by dx (x -> x + dx).
    PiecewiseLinear shifted(long long dx) const;

private:
    // strictly increasing x, strictly increasing slopes
    std::vector<std::pair<long long, long long>> vertices_;
};

/// One maximal line minorizing the polygon: nu_j(t) = value_at_origin +
/// slope * t, touching the polygon along the segment(s) of that slope.
struct SupportLine {
    Rational slope;
    Rational value_at_origin;

    Rational at(const Rational& t) const { return value_at_origin + slope * t; }
};

struct Segment {
    Rational slope;     // in [0, 1]
    long long mult = 0; // positive

    bool operator==(const Segment&) const = default;
};

/// Convex Newton polygon on [0, h] with nu(0) = 0, stored as runs of
/// strictly increasing slopes. All breakpoints have integer coordinates.
class NewtonPolygon {
public:
    static NewtonPolygon from_segments(std::vector<Segment> segments);
    /// From an unsorted multiset of (slope, multiplicity) runs; merges and
    /// sorts, then validates integrality.
    static NewtonPolygon from_slope_runs(std::vector<Segment> runs);
    static NewtonPolygon from_hull(const PiecewiseLinear& f);
    /// Linear polygon of slope d0/h0 repeated mult times (height h0*mult).
    static NewtonPolygon isoclinic(long long d0, long long h0, long long mult = 1);

    const std::vector<Segment>& segments() const { return segments_; }
    long long height() const { return h_; }
    long long dimension() const { return d_; }
    long long codimension() const { return h_ - d_; }

    Rational evaluate(const Rational& t) const;
    /// Breakpoints including endpoints (0,0) and (h,d).
    std::vector<std::pair<long long, long long>> breakpoints() const;
    bool is_breakpoint(const Rational& t) const;

    bool is_ordinary() const;   // all slopes in {0, 1}
    bool is_isoclinic() const;  // a single slope
    bool is_binilpotent() const;  // all slopes in open (0, 1)

    /// j(nu): nu(c) + 1 when (c, nu(c)) is a breakpoint (endpoints count),
    /// otherwise ceil(nu(c)).
    long long isogeny_cutoff_bound() const;
    /// floor(2 nu(c)); 1 for ordinary polygons.
    long long isomorphism_bound() const;
    /// floor(nu(c)); 0 for ordinary polygons.
    long long minimal_height_value() const;
    /// d; requires c = d > 0.
    long long pqp_bound() const;

    std::vector<SupportLine> support_lines() const;
    /// Maximal line of slope lambda lying on or below the polygon.
    SupportLine support_line_at(const Rational& lambda) const;

    NewtonPolygon dual() const;

    bool operator==(const NewtonPolygon&) const = default;

private:
    std::vector<Segment> segments_;
    long long h_ = 0;
    long long d_ = 0;
};

NewtonPolygon direct_sum(const NewtonPolygon& a, const NewtonPolygon& b);

/// nu1 "below-or-equal" nu2 in the specialization order: same endpoints and
/// every point of nu1 lies on or above nu2.
bool preceq(const NewtonPolygon& nu1, const NewtonPolygon& nu2);

long long Nh(long long h);

struct HomBound {
    long long bound = 0;            // the floored symmetric bound
    std::vector<Rational> chain;    // non-decreasing certified chain
};

/// Upper bound for the homomorphism number of the pair, with the full
/// monotone chain bound <= nu+(c+) <= nu(c)+nu'(c') <= cd/h + c'd'/h'
/// <= c+d+/h+ <= h+/4.
HomBound hom_number_bound(const NewtonPolygon& nuD, const NewtonPolygon& nuDp);

}  // namespace dmkit

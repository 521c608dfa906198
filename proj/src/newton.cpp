#include "dmkit/newton.hpp"

#include <algorithm>
#include <map>

namespace dmkit {

long long rational_floor(const Rational& r) {
    long long n = r.numerator(), d = r.denominator();  // d > 0
    long long q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

long long rational_ceil(const Rational& r) { return -rational_floor(-r); }

// ---------------------------------------------------------------------------

PiecewiseLinear PiecewiseLinear::hull(
    const std::vector<std::pair<long long, std::optional<long long>>>& points) {
    std::vector<std::pair<long long, long long>> pts;
    for (const auto& [x, y] : points)
        if (y) pts.emplace_back(x, *y);
    std::sort(pts.begin(), pts.end());
    // keep the lowest y per x
    std::vector<std::pair<long long, long long>> uniq;
    for (const auto& pt : pts) {
        if (!uniq.empty() && uniq.back().first == pt.first) {
            uniq.back().second = std::min(uniq.back().second, pt.second);
        } else {
            uniq.push_back(pt);
        }
    }
    if (uniq.size() < 2) throw input_error("hull needs at least two finite points");

    auto cross = [](const std::pair<long long, long long>& o,
                    const std::pair<long long, long long>& a,
                    const std::pair<long long, long long>& b) {
        return static_cast<__int128>(a.first - o.first) * (b.second - o.second) -
               static_cast<__int128>(a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<long long, long long>> hull;
    for (const auto& pt : uniq) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull[hull.size() - 1], pt) <= 0)
            hull.pop_back();
        hull.push_back(pt);
    }
    PiecewiseLinear out;
    out.vertices_ = std::move(hull);
    return out;
}

Rational PiecewiseLinear::evaluate(const Rational& t) const {
    if (t < Rational(x_min()) || t > Rational(x_max()))
        throw input_error("evaluation point outside the hull domain");
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        auto [x0, y0] = vertices_[i];
        auto [x1, y1] = vertices_[i + 1];
        if (t <= Rational(x1))
            return Rational(y0) + Rational(y1 - y0, x1 - x0) * (t - Rational(x0));
    }
    return Rational(vertices_.back().second);
}

bool PiecewiseLinear::is_vertex(long long x) const {
    return std::any_of(vertices_.begin(), vertices_.end(),
                       [&](const auto& v) { return v.first == x; });
}

PiecewiseLinear PiecewiseLinear::shifted(long long dx) const {
    PiecewiseLinear out(*this);
    for (auto& v : out.vertices_) v.first += dx;
    return out;
}

// ---------------------------------------------------------------------------

NewtonPolygon NewtonPolygon::from_segments(std::vector<Segment> segments) {
    NewtonPolygon nu;
    Rational prev(-1);
    Rational y(0);
    for (const auto& s : segments) {
        if (s.mult <= 0) throw input_error("segment multiplicity must be positive");
        if (s.slope < Rational(0) || s.slope > Rational(1))
            throw input_error("slope outside [0, 1]");
        if (!(prev < s.slope)) throw input_error("slopes must be strictly increasing");
        prev = s.slope;
        y += s.slope * Rational(s.mult);
        if (y.denominator() != 1)
            throw input_error("breakpoints must have integer coordinates");
        nu.h_ += s.mult;
    }
    nu.d_ = y.numerator();
    nu.segments_ = std::move(segments);
    return nu;
}

NewtonPolygon NewtonPolygon::from_slope_runs(std::vector<Segment> runs) {
    std::map<Rational, long long> merged;
    for (const auto& s : runs) merged[s.slope] += s.mult;
    std::vector<Segment> segs;
    for (const auto& [slope, mult] : merged) segs.push_back({slope, mult});
    return from_segments(std::move(segs));
}

NewtonPolygon NewtonPolygon::from_hull(const PiecewiseLinear& f) {
    const auto& v = f.vertices();
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        segs.push_back({Rational(v[i + 1].second - v[i].second,
                                 v[i + 1].first - v[i].first),
                        v[i + 1].first - v[i].first});
    return from_segments(std::move(segs));
}

NewtonPolygon NewtonPolygon::isoclinic(long long d0, long long h0, long long mult) {
    if (h0 <= 0 || mult <= 0) throw input_error("isoclinic polygon needs positive height");
    return from_segments({{Rational(d0, h0), h0 * mult}});
}

Rational NewtonPolygon::evaluate(const Rational& t) const {
    if (t < Rational(0) || t > Rational(h_))
        throw input_error("evaluation point outside [0, h]");
    Rational x(0), y(0);
    for (const auto& s : segments_) {
        Rational x1 = x + Rational(s.mult);
        if (t <= x1) return y + s.slope * (t - x);
        x = x1;
        y += s.slope * Rational(s.mult);
    }
    return y;
}

std::vector<std::pair<long long, long long>> NewtonPolygon::breakpoints() const {
    std::vector<std::pair<long long, long long>> bp{{0, 0}};
    Rational y(0);
    long long x = 0;
    for (const auto& s : segments_) {
        x += s.mult;
        y += s.slope * Rational(s.mult);
        bp.emplace_back(x, y.numerator());
    }
    return bp;
}

bool NewtonPolygon::is_breakpoint(const Rational& t) const {
    if (t.denominator() != 1) return false;
    long long x = t.numerator();
    for (const auto& [bx, by] : breakpoints())
        if (bx == x) return true;
    return false;
}

bool NewtonPolygon::is_ordinary() const {
    return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) {
        return s.slope == Rational(0) || s.slope == Rational(1);
    });
}

bool NewtonPolygon::is_isoclinic() const { return segments_.size() == 1; }

bool NewtonPolygon::is_binilpotent() const {
    return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) {
        return s.slope > Rational(0) && s.slope < Rational(1);
    });
}

long long NewtonPolygon::isogeny_cutoff_bound() const {
    if (h_ < 1) throw input_error("empty polygon");
    long long c = codimension();
    Rational nc = evaluate(Rational(c));
    if (is_breakpoint(Rational(c))) {
        if (nc.denominator() != 1) throw internal_error("breakpoint value not integral");
        return nc.numerator() + 1;
    }
    return rational_ceil(nc);
}

long long NewtonPolygon::isomorphism_bound() const {
    if (is_ordinary()) return 1;
    return rational_floor(Rational(2) * evaluate(Rational(codimension())));
}

long long NewtonPolygon::minimal_height_value() const {
    if (is_ordinary()) return 0;
    return rational_floor(evaluate(Rational(codimension())));
}

long long NewtonPolygon::pqp_bound() const {
    if (codimension() != dimension() || dimension() == 0)
        throw input_error("bound requires c = d > 0");
    return dimension();
}

std::vector<SupportLine> NewtonPolygon::support_lines() const {
    std::vector<SupportLine> lines;
    Rational x(0), y(0);
    for (const auto& s : segments_) {
        lines.push_back({s.slope, y - s.slope * x});
        x += Rational(s.mult);
        y += s.slope * Rational(s.mult);
    }
    return lines;
}

SupportLine NewtonPolygon::support_line_at(const Rational& lambda) const {
    bool first = true;
    Rational best(0);
    for (const auto& [bx, by] : breakpoints()) {
        Rational v = Rational(by) - lambda * Rational(bx);
        if (first || v < best) best = v;
        first = false;
    }
    return {lambda, best};
}

NewtonPolygon NewtonPolygon::dual() const {
    std::vector<Segment> segs(segments_.rbegin(), segments_.rend());
    for (auto& s : segs) s.slope = Rational(1) - s.slope;
    return from_segments(std::move(segs));
}

NewtonPolygon direct_sum(const NewtonPolygon& a, const NewtonPolygon& b) {
    std::vector<Segment> runs = a.segments();
    runs.insert(runs.end(), b.segments().begin(), b.segments().end());
    return NewtonPolygon::from_slope_runs(std::move(runs));
}

bool preceq(const NewtonPolygon& nu1, const NewtonPolygon& nu2) {
    if (nu1.height() != nu2.height() || nu1.dimension() != nu2.dimension())
        throw input_error("specialization comparison requires equal endpoints");
    // convexity: it suffices to compare at the breakpoints of both polygons
    for (const auto& [x, y] : nu1.breakpoints())
        if (Rational(y) < nu2.evaluate(Rational(x))) return false;
    for (const auto& [x, y] : nu2.breakpoints())
        if (nu1.evaluate(Rational(x)) < Rational(y)) return false;
    return true;
}

long long Nh(long long h) {
    if (h < 0) throw input_error("height must be non-negative");
    return h / 2;
}

HomBound hom_number_bound(const NewtonPolygon& nuD, const NewtonPolygon& nuDp) {
    if (nuD.height() < 1 || nuDp.height() < 1) throw input_error("empty polygon");
    NewtonPolygon plus = direct_sum(nuD, nuDp);
    Rational cplus(plus.codimension());
    auto lines = plus.support_lines();

    auto max_over = [&](const NewtonPolygon& part) {
        bool first = true;
        Rational best(0);
        for (const auto& line : lines) {
            bool occurs = std::any_of(part.segments().begin(), part.segments().end(),
                                      [&](const Segment& s) { return s.slope == line.slope; });
            if (!occurs) continue;
            Rational v = line.at(cplus);
            if (first || v > best) best = v;
            first = false;
        }
        if (first) throw internal_error("no support line matched a summand slope");
        return best;
    };

    Rational mD = max_over(nuD), mDp = max_over(nuDp);
    HomBound out;
    out.bound = rational_floor(std::min(mD, mDp));
    Rational nu_plus_c = plus.evaluate(cplus);
    Rational sum_vals = nuD.evaluate(Rational(nuD.codimension())) +
                        nuDp.evaluate(Rational(nuDp.codimension()));
    Rational cd_sum =
        Rational(nuD.codimension() * nuD.dimension(), nuD.height()) +
        Rational(nuDp.codimension() * nuDp.dimension(), nuDp.height());
    Rational cd_plus = Rational(plus.codimension() * plus.dimension(), plus.height());
    out.chain = {Rational(out.bound), nu_plus_c, sum_vals, cd_sum, cd_plus,
                 Rational(plus.height(), 4)};
    return out;
}

}  // namespace dmkit

#include "dmkit/json_io.hpp"

namespace dmkit {

WittScalar scalar_from_json(const RingPtr& ring, const json& j) {
    if (j.is_number_integer()) return WittScalar::from_int(ring, j.get<long long>());
    if (j.is_array()) {
        if (j.size() > static_cast<std::size_t>(ring->degree()))
            throw input_error("scalar array longer than the residue degree");
        WittScalar out = WittScalar::zero(ring);
        WittScalar g = WittScalar::one(ring);
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number_integer())
                throw input_error("scalar array entries must be integers");
            out = out + WittScalar::from_int(ring, j[i].get<long long>()) * g;
            g = g * WittScalar::generator(ring);
        }
        return out;
    }
    throw input_error("scalar must be an integer or an array of digits");
}

json scalar_to_json(const WittScalar& x) { return json(x.coeffs()); }

CyclicPresentation presentation_from_json(const json& j,
                                          std::optional<int> precision_override) {
    for (const char* key : {"p", "n", "N", "c", "d", "a", "b"})
        if (!j.contains(key)) throw input_error(std::string("missing field: ") + key);
    long long p = j.at("p").get<long long>();
    int n = j.at("n").get<int>();
    int N = precision_override.value_or(j.at("N").get<int>());
    int c = j.at("c").get<int>();
    int d = j.at("d").get<int>();
    if (p < 2) throw input_error("field p must be a prime >= 2");
    if (c < 1 || d < 1) throw input_error("fields c and d must be >= 1");
    auto ring = WittRing::create(static_cast<std::uint64_t>(p), n, N);

    const auto& ja = j.at("a");
    const auto& jb = j.at("b");
    if (!ja.is_array() || static_cast<int>(ja.size()) != c + 1)
        throw input_error("field a must list exactly c+1 scalars");
    if (!jb.is_array() || static_cast<int>(jb.size()) != d)
        throw input_error("field b must list exactly d scalars");

    CyclicPresentation psi;
    psi.ring = ring;
    psi.c = c;
    psi.d = d;
    for (const auto& e : ja) psi.a.push_back(scalar_from_json(ring, e));
    for (const auto& e : jb) psi.b.push_back(scalar_from_json(ring, e));
    psi.validate();
    return psi;
}

json presentation_to_json(const CyclicPresentation& psi) {
    json ja = json::array(), jb = json::array();
    for (const auto& x : psi.a) ja.push_back(scalar_to_json(x));
    for (const auto& x : psi.b) jb.push_back(scalar_to_json(x));
    return {{"p", psi.ring->p()},   {"n", psi.ring->degree()},
            {"N", psi.ring->precision()}, {"c", psi.c},
            {"d", psi.d},           {"a", ja},
            {"b", jb}};
}

json polygon_to_json(const NewtonPolygon& nu) {
    json segs = json::array(), bps = json::array();
    for (const auto& s : nu.segments())
        segs.push_back({{"slope", std::to_string(s.slope.numerator()) + "/" +
                                      std::to_string(s.slope.denominator())},
                        {"mult", s.mult}});
    for (auto [x, y] : nu.breakpoints()) bps.push_back({x, y});
    return {{"height", nu.height()},
            {"dimension", nu.dimension()},
            {"segments", segs},
            {"breakpoints", bps}};
}

json report_to_json(const InvariantReport& r) {
    json ell = r.ell.exact ? json{{"exact", r.ell.value}}
                           : json{{"interval", {r.ell.lo, r.ell.hi}}};
    json out = {{"polygon", polygon_to_json(r.polygon)},
                {"c", r.c},
                {"d", r.d},
                {"h", r.h},
                {"a", r.a},
                {"binilpotent", r.binilpotent},
                {"isoclinic", r.isoclinic},
                {"b_exact", r.b_exact},
                {"q_exact", r.q_exact},
                {"n_upper", r.n_upper},
                {"ell", ell},
                {"traverso_min_cd", r.traverso_min_cd},
                {"traverso_violated", r.traverso_violated},
                {"citations", r.citations}};
    if (r.b_witness) out["b_witness"] = presentation_to_json(*r.b_witness);
    return out;
}

json profile_to_json(const GammaProfile& prof) {
    json rows = json::array();
    for (const auto& row : prof.table)
        rows.push_back({{"m", row.m}, {"r", row.r}, {"log_count", row.log_count}});
    json gamma = json::array();
    for (const auto& g : prof.gamma)
        gamma.push_back(g ? json(*g) : json(nullptr));
    json out = {{"experimental", true}, {"table", rows}, {"gamma", gamma}};
    out["f_detected"] = prof.f_detected ? json(*prof.f_detected) : json(nullptr);
    return out;
}

}  // namespace dmkit

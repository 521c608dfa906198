#include "dmkit/cli.hpp"

#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dmkit/verify.hpp"

namespace dmkit {

namespace {

std::string polygon_id(const NewtonPolygon& nu) {
    std::ostringstream os;
    bool first = true;
    for (const auto& s : nu.segments()) {
        if (!first) os << "+";
        first = false;
        os << s.slope.numerator() << "/" << s.slope.denominator() << "x" << s.mult;
    }
    return os.str();
}

long long parse_budget(const std::string& s) {
    if (s == "low") return 64;
    if (s == "default" || s.empty()) return 4096;
    try {
        return std::stoll(s);
    } catch (...) {
        throw input_error("budget must be 'low', 'default' or an integer");
    }
}

struct Options {
    std::string psi_text, psi_file;
    std::vector<int> minimal;
    int precision = 0;
    std::string budget = "default";
    std::string format = "json";
    std::uint64_t seed = 0;
    std::string only;
    int p = 2, n = 1;
    int h_max = 4, val_max = 2;
    int m_max = 3, r_max = 6;
};

json load_psi_json(const Options& opt) {
    std::string text = opt.psi_text;
    if (!opt.psi_file.empty()) {
        std::ifstream in(opt.psi_file);
        if (!in) throw input_error("cannot open file: " + opt.psi_file);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    if (text.empty()) throw input_error("no presentation given (use --psi or --psi-file)");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("malformed JSON: ") + e.what());
    }
}

json config_echo(const std::string& command, const Options& opt,
                 const RingPtr& ring) {
    json cfg = {{"command", command},
                {"format", opt.format},
                {"seed", opt.seed},
                {"budget", parse_budget(opt.budget)}};
    if (ring) {
        cfg["p"] = ring->p();
        cfg["n"] = ring->degree();
        cfg["N"] = ring->precision();
    }
    return cfg;
}

void emit(std::ostream& out, const Options& opt, const json& doc) {
    if (opt.format == "json") {
        out << doc.dump(2) << "\n";
        return;
    }
    // text: flat key: value dump in stable key order
    out << "# config: " << doc.at("config").dump() << "\n";
    for (const auto& [key, value] : doc.items()) {
        if (key == "config") continue;
        out << key << ": " << value.dump() << "\n";
    }
}

CyclicPresentation resolve_psi(const Options& opt) {
    if (!opt.minimal.empty()) {
        int cj = opt.minimal[0], dj = opt.minimal[1], mult = opt.minimal[2];
        if (mult != 1)
            throw input_error("reports need a cyclic module; use multiplicity 1");
        if (cj < 1 || dj < 1 || std::gcd(cj, dj) != 1)
            throw input_error("minimal parameters need coprime c, d >= 1");
        int h = cj + dj;
        Rational nuc(cj * dj, h);
        int need = static_cast<int>(2 * rational_floor(nuc)) + dj + h + 2;
        int N = opt.precision > 0 ? opt.precision : need + 6;
        auto ring = WittRing::create(static_cast<std::uint64_t>(opt.p), opt.n, N);
        CyclicPresentation psi;
        psi.ring = ring;
        psi.c = cj;
        psi.d = dj;
        psi.a.assign(static_cast<std::size_t>(cj) + 1, WittScalar::zero(ring));
        psi.b.assign(static_cast<std::size_t>(dj), WittScalar::zero(ring));
        psi.a[0] = WittScalar::one(ring);
        psi.b[static_cast<std::size_t>(dj) - 1] = WittScalar::one(ring);
        return psi;
    }
    std::optional<int> over;
    if (opt.precision > 0) over = opt.precision;
    return presentation_from_json(load_psi_json(opt), over);
}

int cmd_invariants(const Options& opt, std::ostream& out) {
    auto psi = resolve_psi(opt);
    InvariantReport rep;
    try {
        rep = report(psi);
    } catch (const precision_error& e) {
        // coefficients are exact, so lifting to the suggested precision is
        // canonical; an explicit --precision stays authoritative
        if (opt.precision > 0) throw;
        psi = lift_presentation(psi, e.suggested_precision - psi.ring->precision());
        rep = report(psi);
    }
    json doc = report_to_json(rep);
    doc["config"] = config_echo("invariants", opt, psi.ring);
    emit(out, opt, doc);
    return 0;
}

int cmd_newton(const Options& opt, std::ostream& out) {
    auto psi = resolve_psi(opt);
    auto nu = newton_from_psi(psi);
    json doc = {{"polygon", polygon_to_json(nu)},
                {"polygon_id", polygon_id(nu)},
                {"dual", polygon_to_json(nu.dual())},
                {"isogeny_cutoff_bound", nu.isogeny_cutoff_bound()},
                {"minimal_height_value", nu.minimal_height_value()},
                {"isomorphism_bound", nu.isomorphism_bound()},
                {"isoclinic", nu.is_isoclinic()},
                {"binilpotent", nu.is_binilpotent()},
                {"ordinary", nu.is_ordinary()}};
    doc["config"] = config_echo("newton", opt, psi.ring);
    emit(out, opt, doc);
    return 0;
}

int cmd_gamma(const Options& opt, std::ostream& out) {
    auto psi = resolve_psi(opt);
    auto prof = gamma_profile(psi, from_cyclic(psi), opt.m_max, opt.r_max,
                              parse_budget(opt.budget));
    if (opt.format == "csv") {
        out << "# config: " << config_echo("gamma", opt, psi.ring).dump() << "\n";
        out << "m,r,log_count\n";
        for (const auto& row : prof.table)
            out << row.m << "," << row.r << "," << row.log_count << "\n";
        return 0;
    }
    json doc = profile_to_json(prof);
    doc["config"] = config_echo("gamma", opt, psi.ring);
    emit(out, opt, doc);
    return 0;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
    auto rows = run_sweep(static_cast<std::uint64_t>(opt.p), opt.n, opt.h_max,
                          opt.val_max, opt.precision);
    out << "# config: " << config_echo("sweep", opt, nullptr).dump() << "\n";
    out << "index,c,d,h,polygon,isoclinic,b,q,ell_lo,ell_hi,ell_exact,min_cd,"
           "two_nu_floor,status\n";
    for (const auto& r : rows)
        out << r.index << "," << r.c << "," << r.d << "," << r.h << "," << r.polygon
            << "," << (r.isoclinic ? 1 : 0) << "," << r.b << "," << r.q << ","
            << r.ell_lo << "," << r.ell_hi << "," << (r.ell_exact ? 1 : 0) << ","
            << r.min_cd << "," << r.two_nu_floor << "," << r.status << "\n";
    return 0;
}

int cmd_verify(const Options& opt, std::ostream& out) {
    bool low = opt.budget == "low";
    auto results = run_acceptance(low, opt.only);
    bool all_ok = true;
    out << "# config: " << config_echo("verify-paper", opt, nullptr).dump() << "\n";
    for (const auto& r : results) {
        bool ok = r.ok(low);
        all_ok = all_ok && ok;
        const char* tag = r.status == "inconclusive" ? (ok ? "SKIP" : "FAIL")
                          : ok                       ? "PASS"
                                                     : "FAIL";
        out << "[" << tag << "] " << r.id << ": " << r.name << " — " << r.detail
            << "\n";
    }
    out << (all_ok ? "all criteria passed" : "FAILURES present") << "\n";
    return all_ok ? 0 : 4;
}

}  // namespace

std::vector<SweepRow> run_sweep(std::uint64_t p, int n, int h_max, int val_max,
                                int precision_override) {
    std::vector<SweepRow> rows;
    int index = 0;
    for (int h = 2; h <= h_max; ++h)
        for (int c = 1; c < h; ++c) {
            int d = h - c;
            int N = precision_override > 0 ? precision_override : 2 * h + 10;
            auto ring = WittRing::create(p, n, N);
            int slots = c + (d - 1);  // a_1..a_c and b_1..b_{d-1}
            std::vector<int> pat(static_cast<std::size_t>(slots), 0);
            while (true) {
                CyclicPresentation psi;
                psi.ring = ring;
                psi.c = c;
                psi.d = d;
                psi.a.assign(static_cast<std::size_t>(c) + 1, WittScalar::zero(ring));
                psi.b.assign(static_cast<std::size_t>(d), WittScalar::zero(ring));
                psi.a[0] = WittScalar::one(ring);
                psi.b[static_cast<std::size_t>(d) - 1] = WittScalar::one(ring);
                for (int s = 0; s < slots; ++s) {
                    int v = pat[static_cast<std::size_t>(s)];
                    if (v == 0) continue;  // zero coefficient
                    WittScalar x = WittScalar::one(ring).mul_pow_p(v);
                    if (s < c)
                        psi.a[static_cast<std::size_t>(s) + 1] = x;
                    else
                        psi.b[static_cast<std::size_t>(s - c)] = x;
                }

                SweepRow row;
                row.index = index++;
                row.c = c;
                row.d = d;
                row.h = h;
                row.status = "ok";
                try {
                    auto nu = newton_from_psi(psi);
                    row.polygon = polygon_id(nu);
                    row.isoclinic = nu.is_isoclinic();
                    row.min_cd = std::min(c, d);
                    row.two_nu_floor = nu.isomorphism_bound();
                    row.b = isogeny_cutoff_exact(psi).value;
                    row.q = minimal_height(psi);
                    if (row.isoclinic) {
                        int ell = level_torsion_isoclinic(from_cyclic(psi)).ell;
                        row.ell_lo = row.ell_hi = ell;
                        row.ell_exact = true;
                    } else {
                        row.ell_lo = 1;
                        row.ell_hi = row.two_nu_floor;
                        row.ell_exact = false;
                    }
                } catch (const budget_error&) {
                    row.status = "budget";
                } catch (const precision_error&) {
                    row.status = "precision";
                }
                rows.push_back(row);

                int s = 0;
                while (s < slots && ++pat[static_cast<std::size_t>(s)] > val_max)
                    pat[static_cast<std::size_t>(s++)] = 0;
                if (s == slots) break;
            }
        }
    return rows;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"invariants of p-divisible groups from cyclic presentations"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision", opt.precision, "working precision N override");
        sub->add_option("--budget", opt.budget, "'low', 'default' or a work bound");
        sub->add_option("--format", opt.format, "json | text | csv")
            ->check(CLI::IsMember({"json", "text", "csv"}));
        sub->add_option("--seed", opt.seed, "seed echoed into the config header");
    };
    auto add_psi = [&](CLI::App* sub) {
        sub->add_option("--psi", opt.psi_text, "inline presentation JSON");
        sub->add_option("--psi-file", opt.psi_file, "presentation JSON file");
    };

    auto* inv = app.add_subcommand("invariants", "full invariant report");
    add_common(inv);
    add_psi(inv);
    inv->add_option("--minimal", opt.minimal, "c d mult of a simple minimal module")
        ->expected(3);
    inv->add_option("--p", opt.p, "prime for --minimal");
    inv->add_option("--n", opt.n, "residue degree for --minimal");

    auto* newt = app.add_subcommand("newton", "Newton polygon and formula bounds");
    add_common(newt);
    add_psi(newt);

    auto* ver = app.add_subcommand("verify-paper", "run the pinned verification suite");
    ver->alias("verify");
    add_common(ver);
    ver->add_option("--only", opt.only, "substring filter on criterion names");

    auto* sw = app.add_subcommand("sweep", "enumerate presentations, one CSV row each");
    add_common(sw);
    sw->add_option("--height", opt.h_max, "maximum height");
    sw->add_option("--p", opt.p, "prime");
    sw->add_option("--n", opt.n, "residue degree");
    sw->add_option("--valmax", opt.val_max, "max interior coefficient valuation");

    auto* ga = app.add_subcommand("gamma", "kernel-count growth profile");
    add_common(ga);
    add_psi(ga);
    ga->add_option("--m-max", opt.m_max, "maximum truncation level");
    ga->add_option("--r-max", opt.r_max, "maximum extension degree");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (inv->parsed()) return cmd_invariants(opt, out);
        if (newt->parsed()) return cmd_newton(opt, out);
        if (ver->parsed()) return cmd_verify(opt, out);
        if (sw->parsed()) return cmd_sweep(opt, out);
        if (ga->parsed()) return cmd_gamma(opt, out);
        err << "input error: no command\n";
        return 1;
    } catch (const precision_error& e) {
        err << "precision error: " << e.what()
            << " (suggested precision: " << e.suggested_precision << ")\n";
        return 2;
    } catch (const budget_error& e) {
        err << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace dmkit

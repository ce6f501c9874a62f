#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <besovlab/approx.hpp>
#include <besovlab/error.hpp>
#include <besovlab/expression.hpp>
#include <besovlab/generators.hpp>
#include <besovlab/io.hpp>
#include <besovlab/norms.hpp>
#include <besovlab/parabolic.hpp>
#include <besovlab/pencil.hpp>
#include <besovlab/verify.hpp>
#include <besovlab/wavelet.hpp>

namespace besovlab::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Json = nlohmann::ordered_json;

std::string f17(double v) { return format_double(v); }

Json geometry_json(const GeometryOptions& g) {
    if (!g.file.empty()) return Json{{"file", g.file}};
    Json j{{"name", g.name}};
    if (g.name == "wedge") j["theta_deg"] = g.theta_deg;
    return j;
}

DomainGeometry make_geometry(const GeometryOptions& g) {
    if (!g.file.empty()) return load_geometry(g.file);
    if (g.name == "l-shape") return DomainGeometry::l_shape();
    if (g.name == "square") return DomainGeometry::unit_square();
    if (g.name == "wedge") return DomainGeometry::wedge(g.theta_deg * kDeg);
    throw Error("bad-params", "unknown geometry '" + g.name + "' (l-shape, square, wedge)");
}

/// Snapshot values placed on the geometry's raster; cells outside the
/// domain are zeroed.
Snapshot load_field(const std::string& path, const DomainGeometry& geom) {
    Snapshot s = read_snapshot(path, geom.bounding_box());
    SampledField f = rasterize(geom, s.field.level());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.mask()[i]) f.values()[i] = s.field.values()[i];
    }
    s.field = std::move(f);
    return s;
}

std::string field_csv(const SampledField& f) {
    std::string out = "x,y,inside,value\n";
    for (std::size_t iy = 0; iy < f.n(); ++iy) {
        for (std::size_t ix = 0; ix < f.n(); ++ix) {
            const Point c = f.center(ix, iy);
            out += csv_row({f17(c.x), f17(c.y), f.inside(ix, iy) ? "1" : "0", f17(f(ix, iy))}) + "\n";
        }
    }
    return out;
}

double parse_q(const std::string& q) {
    if (q == "inf") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(q, &used);
        if (used == q.size() && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    throw Error("bad-params", "q must be a positive number or 'inf', got '" + q + "'");
}

/// "family:key=value,key=value".
struct NormRequest {
    std::string family;
    std::map<std::string, std::string> kv;

    double number(const std::string& key, double fallback) const {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        if (key == "q") return parse_q(it->second);
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used == it->second.size()) return v;
        } catch (const std::exception&) {
        }
        throw Error("bad-params", "bad value for " + key + ": '" + it->second + "'");
    }
};

NormRequest parse_norm_request(const std::string& text) {
    NormRequest r;
    const auto colon = text.find(':');
    r.family = text.substr(0, colon);
    if (r.family != "besov" && r.family != "adaptivity" && r.family != "modulus" && r.family != "kondratiev") {
        throw Error("bad-params", "unknown norm family in '" + text + "' (besov, adaptivity, modulus, kondratiev)");
    }
    if (colon == std::string::npos) return r;
    std::istringstream in(text.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("bad-params", "expected key=value in '" + text + "'");
        r.kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return r;
}

double parse_angle_arg(const std::string& text) {
    try {
        return parse_angle(text);
    } catch (const Error&) {
        throw Error("bad-params", "cannot read angle '" + text + "' (use 90deg, 0.5pi or radians)");
    }
}

Json doubles(const std::vector<double>& v) {
    Json j = Json::array();
    for (double x : v) j.push_back(x);
    return j;
}

}  // namespace

int run_gen(const GenOptions& o, const OutputDir& out) {
    if (o.level < 1) throw Error("bad-params", "level must be >= 1");
    RunManifest m;
    m.subcommand = "gen";
    m.params = {{"kind", o.kind},       {"geometry", geometry_json(o.geometry)},
                {"level", o.level},     {"lambda", o.lambda},
                {"cutoff", !o.no_cutoff}, {"center", {o.center_x, o.center_y}},
                {"radius", o.radius},   {"atom", {o.atom_level, o.atom_k1, o.atom_k2, o.atom_type}},
                {"order", o.order},     {"name", o.name}};
    if (!o.geometry.file.empty()) m.add_input(o.geometry.file);
    const std::string snap = o.name + ".psnp";
    const std::string csv = o.name + ".csv";
    out.path(snap);
    m.outputs = {snap, csv};

    const DomainGeometry geom = make_geometry(o.geometry);
    SampledField f;
    if (o.kind == "singular") {
        f = singular_field(geom, o.level, o.lambda, !o.no_cutoff);
    } else if (o.kind == "bump") {
        f = bump_field(geom.bounding_box(), o.level, {o.center_x, o.center_y}, o.radius);
    } else if (o.kind == "wavelet-atom") {
        const WaveletIndex idx{o.atom_level, {o.atom_k1, o.atom_k2}, o.atom_type};
        f = synthesize_atom(idx, WaveletSystem(o.order), o.level, geom.bounding_box());
    } else if (o.kind == "manufactured") {
        if (!(o.radius > 0.0)) throw Error("bad-params", "radius must be positive");
        f = rasterize(geom, o.level);
        for (std::size_t iy = 0; iy < f.n(); ++iy) {
            for (std::size_t ix = 0; ix < f.n(); ++ix) {
                if (f.inside(ix, iy)) f(ix, iy) = manufactured_profile(f.center(ix, iy), {o.center_x, o.center_y}, o.radius);
            }
        }
    } else {
        throw Error("bad-params", "unknown kind '" + o.kind + "' (singular, bump, wavelet-atom, manufactured)");
    }

    m.write(out);
    write_snapshot(out.path(snap).string(), f, 0.0);
    out.write_text(csv, field_csv(f));
    std::printf("wrote %s (level %d, %zu cells)\n", out.path(snap).string().c_str(), f.level(), f.size());
    return 0;
}

int run_norms(const NormsOptions& o, const OutputDir& out) {
    const double q = parse_q(o.q);
    RunManifest m;
    m.subcommand = "norms";
    m.params = {{"input", o.input},     {"geometry", geometry_json(o.geometry)},
                {"cutoff", o.cutoff},   {"order", o.order},
                {"s", doubles(o.s)},    {"p", o.p},
                {"q", o.q},             {"adaptivity", o.adaptivity},
                {"modulus", o.modulus}, {"kondratiev_m", o.kondratiev_m},
                {"a", doubles(o.a)},
                {"specs", o.specs}};
    m.add_input(o.input);
    if (!o.geometry.file.empty()) m.add_input(o.geometry.file);
    m.outputs = {"norms.csv", "breakdown.csv"};

    const DomainGeometry geom = make_geometry(o.geometry);
    SampledField f = load_field(o.input, geom).field;
    if (o.cutoff) f = apply_cutoff(f, geom);
    m.write(out);

    const WaveletSystem sys(o.order);
    const CoeffTree tree = dwt_forward(f, sys);
    std::vector<NormReport> reports;
    if (o.specs.empty()) {
        for (double s : o.s) {
            BesovSpec spec{s, o.p, q, 2};
            if (o.adaptivity) spec.p = spec.q = adaptivity_tau(s, 2, o.p);
            reports.push_back(besov_norm_wavelet(tree, spec));
            if (o.modulus) reports.push_back(besov_norm_modulus(f, spec));
        }
        for (double a : o.a) reports.push_back(kondratiev_norm(f, geom, {o.kondratiev_m, o.p, a}));
    }
    for (const std::string& text : o.specs) {
        const NormRequest r = parse_norm_request(text);
        const double p = r.number("p", o.p);
        if (r.family == "kondratiev") {
            const double mm = r.number("m", o.kondratiev_m);
            if (mm != std::floor(mm)) throw Error("bad-params", "Kondratiev m must be an integer");
            reports.push_back(kondratiev_norm(f, geom, {static_cast<int>(mm), p, r.number("a", 0.0)}));
            continue;
        }
        BesovSpec spec{r.number("s", 1.0), p, r.number("q", q), 2};
        if (r.family == "adaptivity") spec.p = spec.q = adaptivity_tau(spec.s, 2, p);
        if (r.family == "modulus") {
            reports.push_back(besov_norm_modulus(f, spec));
        } else {
            reports.push_back(besov_norm_wavelet(tree, spec));
        }
    }

    std::string norms = "method,s_or_m,p,q_or_a,value,growth_exponent,divergent,level\n";
    std::string br = "method,s_or_m,q_or_a,index,value\n";
    for (const NormReport& r : reports) {
        const std::string method(to_string(r.method));
        norms += csv_row({method, f17(r.s_or_m), f17(r.p), f17(r.q_or_a), f17(r.value), f17(r.growth_exponent),
                          r.divergent ? "1" : "0", std::to_string(r.level)}) +
                 "\n";
        for (std::size_t i = 0; i < r.breakdown.size(); ++i) {
            br += csv_row({method, f17(r.s_or_m), f17(r.q_or_a), std::to_string(i), f17(r.breakdown[i])}) + "\n";
        }
    }
    out.write_text("norms.csv", norms);
    out.write_text("breakdown.csv", br);
    std::printf("%zu norms written to %s\n", reports.size(), out.path("norms.csv").string().c_str());
    return 0;
}

int run_rates(const RatesOptions& o, const OutputDir& out) {
    RunManifest m;
    m.subcommand = "rates";
    m.params = {{"input", o.input}, {"geometry", geometry_json(o.geometry)}, {"cutoff", o.cutoff},
                {"order", o.order}, {"p", o.p},
                {"djp_m", o.djp_m}, {"max_level", o.max_level}};
    m.add_input(o.input);
    if (!o.geometry.file.empty()) m.add_input(o.geometry.file);
    m.outputs = {"rates.csv", "rates_summary.csv"};
    if (o.djp_m > 0.0) m.outputs.push_back("djp.csv");

    const DomainGeometry geom = make_geometry(o.geometry);
    SampledField f = load_field(o.input, geom).field;
    if (o.cutoff) f = apply_cutoff(f, geom);
    if (o.max_level < 0) throw Error("bad-params", "max-level must be >= 0");
    m.write(out);

    const CoeffTree tree = dwt_forward(f, WaveletSystem(o.order), o.max_level > 0 ? o.max_level : f.level());
    std::vector<RateReport> reps{nonlinear_rate(tree, o.p)};
    // The uniform fit uses levels 3..J-2 and needs four of them.
    if (tree.max_level() >= 8) {
        reps.push_back(uniform_rate(tree, o.p));
    } else {
        std::printf("uniform    skipped (needs analysis depth >= 8)\n");
    }
    std::string rates = "method,N,error,in_window\n";
    std::string summary = "method,alpha,residual,window_begin,window_end\n";
    for (const RateReport& r : reps) {
        const std::string method(to_string(r.method));
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            const bool in = i >= r.window_begin && i < r.window_end;
            rates += csv_row({method, f17(r.pairs[i].first), f17(r.pairs[i].second), in ? "1" : "0"}) + "\n";
        }
        summary += csv_row({method, f17(r.alpha), f17(r.residual), std::to_string(r.window_begin),
                            std::to_string(r.window_end)}) +
                   "\n";
        std::printf("%-10s alpha = %.6g\n", method.c_str(), r.alpha);
    }
    out.write_text("rates.csv", rates);
    out.write_text("rates_summary.csv", summary);
    if (o.djp_m > 0.0) {
        const DjpReport d = djp_consistency(tree, o.djp_m, o.p);
        out.write_text("djp.csv", "m,tau,norm_value,growth_exponent,norm_finite,alpha,target,consistent\n" +
                                      csv_row({f17(d.m), f17(d.tau), f17(d.norm_value), f17(d.growth_exponent),
                                               d.norm_finite ? "1" : "0", f17(d.alpha), f17(d.target),
                                               d.consistent ? "1" : "0"}) +
                                      "\n");
    }
    return 0;
}

int run_pencil(const PencilOptions& o, const OutputDir& out) {
    std::vector<double> caps = o.cap_deg, wedges = o.wedge_deg;
    for (const std::string& a : o.cap) caps.push_back(parse_angle_arg(a) / kDeg);
    for (const std::string& a : o.wedge) wedges.push_back(parse_angle_arg(a) / kDeg);
    if (caps.empty() && wedges.empty()) throw Error("bad-params", "give at least one cap or wedge angle");
    int gm = o.gamma_m;
    if (o.gamma >= 0) {
        gm = gamma_m(o.gamma, o.m);
        if (o.gamma_m >= 0 && o.gamma_m != gm) throw Error("bad-params", "--gamma and --gamma-m disagree");
    }

    RunManifest m;
    m.subcommand = "pencil";
    m.params = {{"cap_deg", doubles(caps)}, {"wedge_deg", doubles(wedges)}, {"count", o.count},
                {"m", o.m}, {"gamma", o.gamma}, {"gamma_m", gm}};
    m.outputs = {"pencil.csv"};
    if (gm >= 0) m.outputs.push_back("weight_range.csv");
    m.write(out);

    std::string csv = "kind,angle_deg,index,lb_eigenvalue,lambda_minus,lambda_plus\n";
    for (double deg : caps) {
        const std::vector<double> lb = cap_lb_eigenvalues(deg * kDeg, o.count);
        for (std::size_t k = 0; k < lb.size(); ++k) {
            const PencilPair pr = pencil_eigenvalues_from_lb(lb[k]);
            csv += csv_row({"cap", f17(deg), std::to_string(k + 1), f17(lb[k]), f17(pr.minus), f17(pr.plus)}) + "\n";
            if (k == 0) std::printf("cap %g deg: lambda_1^+ = %.12g\n", deg, pr.plus);
        }
    }
    std::vector<double> thetas;
    for (double deg : wedges) {
        thetas.push_back(deg * kDeg);
        const double d = wedge_delta(deg * kDeg);
        for (int k = 1; k <= o.count; ++k) {
            csv += csv_row({"wedge", f17(deg), std::to_string(k), "", f17(-k * d), f17(k * d)}) + "\n";
        }
        std::printf("wedge %g deg: delta = %.12g\n", deg, d);
    }
    out.write_text("pencil.csv", csv);
    if (gm >= 0) {
        const WeightRange r = admissible_weight_range(o.m, gm, thetas);
        out.write_text("weight_range.csv", "m,gamma_m,lower,upper,lower_closed,upper_closed,feasible,binding,interval\n" +
                                               csv_row({std::to_string(o.m), std::to_string(gm), f17(r.lower),
                                                        f17(r.upper), r.lower_closed ? "1" : "0",
                                                        r.upper_closed ? "1" : "0", r.feasible ? "1" : "0", r.binding,
                                                        r.to_string()}) +
                                               "\n");
        std::printf("admissible a: %s\n", r.to_string().c_str());
    }
    return 0;
}

int run_solve(const SolveOptions& o, const OutputDir& out) {
    SolverConfig cfg;
    cfg.geom = make_geometry(o.geometry);
    cfg.level = o.level;
    cfg.dt = o.dt;
    cfg.T = o.T;
    const Expression forcing = Expression::parse(o.forcing);
    cfg.forcing = [forcing](double x, double y, double t) { return forcing(x, y, t); };
    cfg.eps = o.eps;
    cfg.M = o.M;
    cfg.r0 = o.r0;
    cfg.c = o.c;
    cfg.picard_tol = o.picard_tol;
    if (o.ramp == "auto") {
        cfg.ramp = RampMode::kAuto;
    } else if (o.ramp == "on") {
        cfg.ramp = RampMode::kOn;
    } else if (o.ramp == "off") {
        cfg.ramp = RampMode::kOff;
    } else {
        throw Error("bad-params", "ramp must be auto, on or off");
    }
    if (!(o.dt > 0.0) || !(o.T > 0.0)) throw Error("bad-params", "dt and T must be positive");
    const long steps = std::lround(o.T / o.dt);
    cfg.store_stride = o.stride > 0 ? o.stride : static_cast<int>(std::max(1L, steps));

    RunManifest m;
    m.subcommand = "solve";
    m.params = {{"geometry", geometry_json(o.geometry)},
                {"level", o.level},
                {"dt", o.dt},
                {"T", o.T},
                {"forcing", o.forcing},
                {"eps", o.eps},
                {"M", o.M},
                {"r0", o.r0},
                {"c", o.c},
                {"ramp", o.ramp},
                {"stride", cfg.store_stride},
                {"picard_tol", o.picard_tol}};
    if (!o.geometry.file.empty()) m.add_input(o.geometry.file);
    auto state_name = [](long n) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "state_%05ld.psnp", n);
        return std::string(buf);
    };
    m.outputs = {"trajectory.csv", "summary.csv"};
    if (o.eps > 0.0) m.outputs.push_back("picard.csv");
    for (long n = 0; n <= steps; ++n) {
        if (n % cfg.store_stride == 0 || n == steps) m.outputs.push_back(state_name(n));
    }
    m.write(out);

    Trajectory traj;
    std::optional<PicardTrace> trace;
    if (o.eps > 0.0) {
        PicardResult res = picard_semilinear(cfg);
        trace = res.trace;
        // Picard keeps every level; thin it to the requested stride.
        for (std::size_t i = 0; i < res.trajectory.states.size(); ++i) {
            const long n = static_cast<long>(i);
            if (n % cfg.store_stride == 0 || n == steps) {
                traj.times.push_back(res.trajectory.times[i]);
                traj.states.push_back(std::move(res.trajectory.states[i]));
            }
        }
        traj.warnings = res.trajectory.warnings;
        traj.cg_iterations = res.trajectory.cg_iterations;
    } else {
        traj = linear_solve(cfg);
    }

    std::string tcsv = "step,t,l2_norm,max_abs\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const long n = std::lround(traj.times[i] / o.dt);
        double mx = 0.0;
        for (double v : traj.states[i].values()) mx = std::max(mx, std::abs(v));
        tcsv += csv_row({std::to_string(n), f17(traj.times[i]), f17(traj.states[i].l2_norm()), f17(mx)}) + "\n";
        write_snapshot(out.path(state_name(n)).string(), traj.states[i], traj.times[i]);
    }
    out.write_text("trajectory.csv", tcsv);

    std::string summary = "key,value\n";
    summary += csv_row({"cg_iterations", std::to_string(traj.cg_iterations)}) + "\n";
    for (const std::string& w : traj.warnings) {
        summary += csv_row({"warning", w}) + "\n";
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    if (trace) {
        summary += csv_row({"status", std::string(to_string(trace->status))}) + "\n";
        summary += csv_row({"q", f17(trace->q)}) + "\n";
        summary += csv_row({"invnorm", f17(trace->invnorm)}) + "\n";
        summary += csv_row({"eta", f17(trace->eta)}) + "\n";
        summary += csv_row({"max_epsilon", f17(trace->eps_bound.value)}) + "\n";
        summary += csv_row({"max_epsilon_branch", std::to_string(trace->eps_bound.branch)}) + "\n";
        summary += csv_row({"radius", f17(trace->radius)}) + "\n";
        summary += csv_row({"max_distance", f17(trace->max_distance)}) + "\n";
        summary += csv_row({"defect", f17(trace->defect)}) + "\n";
        std::string pcsv = "iteration,residual,ratio\n";
        for (std::size_t k = 0; k < trace->residuals.size(); ++k) {
            pcsv += csv_row({std::to_string(k + 1), f17(trace->residuals[k]),
                             k == 0 ? "" : f17(trace->ratios[k - 1])}) +
                    "\n";
        }
        out.write_text("picard.csv", pcsv);
        std::printf("picard: %s after %d iterations, q = %.6g (max_epsilon %.6g)\n",
                    std::string(to_string(trace->status)).c_str(), trace->iterations, trace->q,
                    trace->eps_bound.value);
    }
    out.write_text("summary.csv", summary);
    std::printf("stored %zu states in %s\n", traj.states.size(), out.root().string().c_str());
    return trace && trace->status != PicardStatus::kConverged ? 1 : 0;
}

int run_verify(const VerifyCliOptions& o, const OutputDir& out) {
    RunManifest m;
    m.subcommand = "verify";
    m.params = {{"suite", o.suite}, {"heat_level", o.heat_level}, {"fault", std::string(debug::fault())}};
    m.outputs = {"verify.csv"};
    m.write(out);

    VerifyOptions vo;
    vo.heat_level = o.heat_level;
    vo.on_result = [](const CheckResult& r) {
        const std::string tag = r.criterion > 0 ? "criterion " + std::to_string(r.criterion) : "invariant";
        std::printf("%s  %-26s %-13s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), tag.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
    };
    const SuiteReport rep = verify_suite(o.suite, vo);
    out.write_text("verify.csv", suite_csv(rep));
    std::printf("%s: %zu checks, %zu failed, %.1fs\n", rep.suite.c_str(), rep.checks.size(), rep.failures(),
                rep.seconds);
    for (const CheckResult& r : rep.checks) {
        if (!r.passed) std::printf("failed: %s\n", r.name.c_str());
    }
    return rep.passed() ? 0 : 1;
}

}  // namespace besovlab::cli

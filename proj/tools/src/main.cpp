// besovlab command-line front end.
//
//   besovlab [--out DIR] [--config FILE] [--threads N] [--inject-fault NAME] <subcommand> ...
//
// Config files hold key=value lines; subcommand keys go under a [section]
// named after the subcommand. Flags override the file, the file overrides
// the defaults.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include <besovlab/error.hpp>
#include <besovlab/norms.hpp>
#include <besovlab/verify.hpp>

#include "commands.hpp"
#include "manifest.hpp"

namespace {

using namespace besovlab::cli;

void add_geometry(CLI::App* sub, GeometryOptions& g) {
    sub->add_option("--geometry", g.name, "Domain")
        ->check(CLI::IsMember({"l-shape", "square", "wedge"}))
        ->capture_default_str();
    sub->add_option("--theta-deg", g.theta_deg, "Wedge opening in degrees")->capture_default_str();
    sub->add_option("--geom", g.file, "Geometry file (key=value); overrides --geometry")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"besovlab: Besov and Kondratiev regularity experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());
    app.set_config("--config", "", "key=value configuration file");

    std::string out_dir = "besovlab-out";
    int threads = 0;
    std::string fault;
    app.add_option("--out", out_dir, "Output directory; nothing is written outside it")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (sets BESOVLAB_THREADS)")->check(CLI::PositiveNumber);
    app.add_option("--inject-fault", fault, "Deliberate defect for exercising verify")
        ->check(CLI::IsMember({"mis-scaled-weight"}));

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a test field");
    gen_cmd->add_option("--kind", gen.kind, "Field family")
        ->check(CLI::IsMember({"singular", "bump", "wavelet-atom", "manufactured"}))
        ->capture_default_str();
    add_geometry(gen_cmd, gen.geometry);
    gen_cmd->add_option("--level", gen.level, "Grid level (2^level cells per side)")->capture_default_str();
    gen_cmd->add_option("--lambda", gen.lambda, "Singular exponent; <= 0 uses pi / opening")->capture_default_str();
    gen_cmd->add_flag("--no-cutoff", gen.no_cutoff, "Skip the radial cut-off");
    gen_cmd->add_option("--center-x", gen.center_x)->capture_default_str();
    gen_cmd->add_option("--center-y", gen.center_y)->capture_default_str();
    gen_cmd->add_option("--radius", gen.radius, "Bump or manufactured support radius")->capture_default_str();
    gen_cmd->add_option("--atom-level", gen.atom_level)->capture_default_str();
    gen_cmd->add_option("--atom-k1", gen.atom_k1)->capture_default_str();
    gen_cmd->add_option("--atom-k2", gen.atom_k2)->capture_default_str();
    gen_cmd->add_option("--atom-type", gen.atom_type, "1 = high-x, 2 = high-y, 3 = both")->capture_default_str();
    gen_cmd->add_option("--order", gen.order, "Daubechies order for atoms")->capture_default_str();
    gen_cmd->add_option("--name", gen.name, "Output base name")->capture_default_str();

    NormsOptions norms;
    CLI::App* norms_cmd = app.add_subcommand("norms", "Besov, modulus and Kondratiev norms of a snapshot");
    norms_cmd->add_option("--input,--field", norms.input, "Snapshot file")->required()->check(CLI::ExistingFile);
    add_geometry(norms_cmd, norms.geometry);
    norms_cmd->add_flag("--cutoff", norms.cutoff, "Multiply by the geometry's cut-off first");
    norms_cmd->add_option("--order", norms.order)->capture_default_str();
    norms_cmd->add_option("--s", norms.s, "Smoothness grid")->capture_default_str();
    norms_cmd->add_option("--p", norms.p)->capture_default_str();
    norms_cmd->add_option("--q", norms.q, "Number or inf")->capture_default_str();
    norms_cmd->add_flag("--adaptivity", norms.adaptivity, "Use p = q = tau with 1/tau = s/2 + 1/p");
    norms_cmd->add_flag("--modulus", norms.modulus, "Also evaluate the modulus-of-smoothness norm");
    norms_cmd->add_option("--kondratiev-m", norms.kondratiev_m)->capture_default_str();
    norms_cmd->add_option("--a", norms.a, "Kondratiev weights");
    norms_cmd->add_option("--spec", norms.specs,
                          "Explicit norms, e.g. besov:s=1.5,p=2,q=inf or kondratiev:m=1,a=1.3 (repeatable)");

    RatesOptions rates;
    CLI::App* rates_cmd = app.add_subcommand("rates", "Best N-term and uniform approximation rates");
    rates_cmd->add_option("--input,--field", rates.input, "Snapshot file")->required()->check(CLI::ExistingFile);
    add_geometry(rates_cmd, rates.geometry);
    rates_cmd->add_option("--cutoff", rates.cutoff, "Multiply by the cut-off first (true/false)")
        ->capture_default_str();
    rates_cmd->add_option("--order", rates.order)->capture_default_str();
    rates_cmd->add_option("--p", rates.p)->capture_default_str();
    rates_cmd->add_option("--djp-m", rates.djp_m, "Smoothness for the consistency row; 0 skips it")
        ->capture_default_str();
    rates_cmd->add_option("--max-level", rates.max_level, "Analysis depth; 0 uses the field level")
        ->capture_default_str();

    PencilOptions pencil;
    CLI::App* pencil_cmd = app.add_subcommand("pencil", "Operator pencil eigenvalues and weight ranges");
    pencil_cmd->add_option("--cap", pencil.cap, "Cap half-angles (90deg, 0.5pi or radians)");
    pencil_cmd->add_option("--wedge", pencil.wedge, "Wedge openings (270deg, 1.5pi or radians)");
    pencil_cmd->add_option("--cap-deg", pencil.cap_deg, "Cap half-angles in degrees");
    pencil_cmd->add_option("--wedge-deg", pencil.wedge_deg, "Wedge openings in degrees");
    pencil_cmd->add_option("--count", pencil.count)->capture_default_str();
    pencil_cmd->add_option("--m", pencil.m)->capture_default_str();
    pencil_cmd->add_option("--gamma", pencil.gamma, "Regularity gamma >= 2m; sets gamma_m = floor((gamma-1)/2m)");
    pencil_cmd->add_option("--gamma-m", pencil.gamma_m, "gamma_m for the weight range; < 0 skips it")
        ->capture_default_str();

    SolveOptions solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Crank-Nicolson heat or semilinear Picard run");
    add_geometry(solve_cmd, solve.geometry);
    solve_cmd->add_option("--level", solve.level)->capture_default_str();
    solve_cmd->add_option("--dt", solve.dt)->capture_default_str();
    solve_cmd->add_option("--T", solve.T)->capture_default_str();
    solve_cmd->add_option("--forcing", solve.forcing, "Expression in x, y, t")->capture_default_str();
    solve_cmd->add_option("--eps", solve.eps, "Nonlinearity strength; > 0 runs Picard")->capture_default_str();
    solve_cmd->add_option("--M", solve.M)->capture_default_str();
    solve_cmd->add_option("--r0", solve.r0)->capture_default_str();
    solve_cmd->add_option("--c", solve.c)->capture_default_str();
    solve_cmd->add_option("--ramp", solve.ramp)->check(CLI::IsMember({"auto", "on", "off"}))->capture_default_str();
    solve_cmd->add_option("--stride", solve.stride, "Store every k-th step; 0 keeps only the last")
        ->capture_default_str();
    solve_cmd->add_option("--picard-tol", solve.picard_tol)->capture_default_str();

    VerifyCliOptions verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run acceptance suites");
    verify_cmd->add_option("suite", verify.suite, "pencil, norms, rates, picard or all")
        ->check(CLI::IsMember({"pencil", "norms", "rates", "picard", "all"}))
        ->capture_default_str();
    verify_cmd->add_option("--heat-level", verify.heat_level, "Grid level of the heat snapshot")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) setenv("BESOVLAB_THREADS", std::to_string(threads).c_str(), 1);
    if (!fault.empty()) besovlab::debug::set_fault(fault);

    try {
        const OutputDir out(out_dir);
        if (gen_cmd->parsed()) return run_gen(gen, out);
        if (norms_cmd->parsed()) return run_norms(norms, out);
        if (rates_cmd->parsed()) return run_rates(rates, out);
        if (pencil_cmd->parsed()) return run_pencil(pencil, out);
        if (solve_cmd->parsed()) return run_solve(solve, out);
        if (verify_cmd->parsed()) return run_verify(verify, out);
    } catch (const besovlab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

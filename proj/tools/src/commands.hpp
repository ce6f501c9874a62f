#pragma once

#include <string>
#include <vector>

#include "manifest.hpp"

namespace besovlab::cli {

struct GeometryOptions {
    std::string name = "l-shape";  // l-shape | square | wedge
    double theta_deg = 270.0;      // wedge opening
    std::string file;              // key=value geometry file, overrides name
};

struct GenOptions {
    std::string kind = "singular";  // singular | bump | wavelet-atom | manufactured
    GeometryOptions geometry;
    int level = 7;
    double lambda = 0.0;  // <= 0: pi / opening
    bool no_cutoff = false;
    double center_x = 0.5;
    double center_y = 0.5;
    double radius = 0.25;
    int atom_level = 4;
    int atom_k1 = 0;
    int atom_k2 = 0;
    int atom_type = 1;
    int order = 4;
    std::string name = "field";
};

struct NormsOptions {
    std::string input;
    GeometryOptions geometry;
    bool cutoff = false;
    int order = 4;
    std::vector<double> s{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    double p = 2.0;
    std::string q = "2";  // number or "inf"
    bool adaptivity = false;
    bool modulus = false;
    int kondratiev_m = 1;
    std::vector<double> a;
    /// "besov:s=1.5,p=2,q=inf", "adaptivity:s=2", "modulus:s=1",
    /// "kondratiev:m=1,a=1.3"; when given, replaces the grids above.
    std::vector<std::string> specs;
};

struct RatesOptions {
    std::string input;
    GeometryOptions geometry;
    bool cutoff = true;
    int order = 4;
    double p = 2.0;
    double djp_m = 0.0;  // > 0 adds the consistency row
    int max_level = 0;   // analysis depth, 0: the field level
};

struct PencilOptions {
    std::vector<std::string> cap;    // angles: "90deg", "0.5pi", radians
    std::vector<std::string> wedge;
    std::vector<double> cap_deg;
    std::vector<double> wedge_deg;
    int count = 5;
    int m = 1;
    int gamma = -1;    // >= 2m: derive gamma_m from it
    int gamma_m = -1;  // < 0 (and no gamma): skip the weight range
};

struct SolveOptions {
    GeometryOptions geometry;
    int level = 7;
    double dt = 1.0 / 64.0;
    double T = 0.25;
    std::string forcing = "t";
    double eps = 0.0;
    int M = 2;
    double r0 = 2.0;
    double c = 1.0;
    std::string ramp = "auto";
    int stride = 0;  // 0: only the final state
    double picard_tol = 1e-10;
};

struct VerifyCliOptions {
    std::string suite = "all";
    int heat_level = 9;
};

int run_gen(const GenOptions& o, const OutputDir& out);
int run_norms(const NormsOptions& o, const OutputDir& out);
int run_rates(const RatesOptions& o, const OutputDir& out);
int run_pencil(const PencilOptions& o, const OutputDir& out);
int run_solve(const SolveOptions& o, const OutputDir& out);
int run_verify(const VerifyCliOptions& o, const OutputDir& out);

}  // namespace besovlab::cli

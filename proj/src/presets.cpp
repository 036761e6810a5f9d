#include "sov/cli.hpp"

namespace sov::cli {

namespace {

const char* kGl2Boundary = R"(zeta_plus = 0.7+0.3i
zeta_minus = -0.55+0.4i
kappa_plus = 0.45-0.2i
kappa_minus = 0.35+0.15i
tau_plus = 0.3+0.1i
tau_minus = -0.2+0.25i
)";

const char* kGl2Chain = R"(eta = 0.83+0.21i
xi_start = 0.5+0.173i
xi_step = 0.5+0.173i
xi_quadratic = 0.11
)";

const char* kW = R"(W_plus = 1.05-0.506i, -0.053-0.249i, 0.256+0.017i; 0.042-0.93i, 0.786-0.088i, 0.145-0.498i; 0.522-0.293i, 0.379-0.218i, 0.719-0.127i
W_minus = 1.165-0.369i, 0.417-0.183i, -0.051+0.088i; 0.547-0.404i, 0.734-0.084i, 0.141-0.064i; 0.361+0.216i, 0.038+0.086i, 0.703+0.142i
)";

std::string gl3(int N) {
    return "[model]\nrank = 3\nkind = rational\nN = " + std::to_string(N) +
           "\neta = 0.83+0.21i\nxi_start = 1+0.173i\nxi_step = 1+0.173i\n\n[boundary]\n"
           "zeta_plus = 0.7+0.3i\nzeta_minus = -0.55+0.4i\np_plus = 1\np_minus = 2\n" +
           kW + "\n[checks]\nlist = algebra, basis, spectrum, qcurve, simplicity\n\n[output]\ncsv = true\n";
}

std::vector<Preset> build() {
    std::vector<Preset> p;
    const std::string chain = kGl2Chain, bnd = kGl2Boundary;
    p.push_back({"gl2-rational-generic", "rational gl2, N=3, non-commuting boundaries, every applicable check",
                 "[model]\nrank = 2\nkind = rational\nN = 3\n" + chain + "\n[boundary]\n" + bnd +
                     "\n[checks]\nlist = algebra, basis, sklyanin-compare, spectrum, qcurve, scalars, simplicity\n"
                     "\n[output]\ncsv = true\n"});
    p.push_back({"gl2-rational-diagonal", "rational gl2, N=3, diagonal boundaries (inhomogeneous term vanishes)",
                 "[model]\nrank = 2\nkind = rational\nN = 3\n" + chain +
                     "\n[boundary]\nzeta_plus = 0.7+0.3i\nzeta_minus = -0.55+0.4i\nkappa_plus = 0\nkappa_minus = 0\n"
                     "\n[checks]\nlist = algebra, basis, sklyanin-compare, spectrum, qcurve, scalars, simplicity\n"
                     "\n[output]\ncsv = true\n"});
    p.push_back({"gl2-rational-noncommuting", "rational gl2, N=2, second non-commuting boundary pair",
                 "[model]\nrank = 2\nkind = rational\nN = 2\n" + chain +
                     "\n[boundary]\nzeta_plus = 1.1-0.2i\nzeta_minus = 0.6+0.5i\nkappa_plus = 0.3+0.1i\n"
                     "kappa_minus = -0.4+0.2i\ntau_plus = -0.1+0.3i\ntau_minus = 0.4-0.15i\n"
                     "\n[checks]\nlist = algebra, basis, sklyanin-compare, spectrum, qcurve, scalars, simplicity\n"});
    p.push_back({"gl2-trig-generic", "trigonometric gl2, N=3, generic boundaries",
                 "[model]\nrank = 2\nkind = trigonometric\nN = 3\n" + chain + "\n[boundary]\n" + bnd +
                     "\n[checks]\nlist = algebra, basis, spectrum, qcurve, scalars, simplicity\n\n[output]\ncsv = true\n"});
    p.push_back({"gl2-trig-constrained", "trigonometric gl2, N=2, tau_plus on the r=1 constraint surface",
                 "[model]\nrank = 2\nkind = trigonometric\nN = 2\n" + chain +
                     "\n[boundary]\nzeta_plus = 0.7+0.3i\nzeta_minus = -0.55+0.4i\nkappa_plus = 0.45-0.2i\n"
                     "kappa_minus = 0.35+0.15i\ntau_minus = -0.2+0.25i\nconstraint_r = 1\nconstraint_eps = 1, 1\n"
                     "\n[checks]\nlist = algebra, basis, spectrum, qcurve, simplicity\n"});
    p.push_back({"gl3-generic-N1", "rational gl3, N=1, non-commuting rank-1 projector boundaries", gl3(1)});
    p.push_back({"gl3-generic-N2", "rational gl3, N=2, non-commuting rank-1 projector boundaries", gl3(2)});
    p.push_back({"gln4-basis-N1", "rational gl4, N=1, basis construction and simplicity only",
                 "[model]\nrank = 4\nkind = rational\nN = 1\neta = 0.83+0.21i\nxi = 1+0.173i\n"
                 "\n[boundary]\nzeta_plus = 0.7+0.3i\nzeta_minus = -0.55+0.4i\np_plus = 1\np_minus = 2\nW_seed = 7\n"
                 "\n[checks]\nlist = algebra, basis, simplicity\n"});
    p.push_back({"rational-limit-sweep", "trigonometric to rational limit at N=1 with kappa_plus = kappa_minus",
                 "[model]\nrank = 2\nkind = rational\nN = 1\neta = 0.83+0.21i\nxi = 0.5+0.173i\n"
                 "\n[boundary]\nzeta_plus = 0.7+0.3i\nzeta_minus = -0.55+0.4i\nkappa_plus = 0.45-0.2i\n"
                 "kappa_minus = 0.45-0.2i\ntau_plus = 0.3+0.1i\ntau_minus = -0.2+0.25i\n"
                 "\n[checks]\nlist = rational-limit\n\n[rational-limit]\nepsilons = 1e-2, 3e-3, 1e-3, 3e-4, 1e-4\n"});
    return p;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> p = build();
    return p;
}

const Preset* find_preset(const std::string& name) {
    std::string n = name;
    if (n.rfind("preset:", 0) == 0) n = n.substr(7);
    for (const auto& p : presets())
        if (p.name == n) return &p;
    return nullptr;
}

}  // namespace sov::cli

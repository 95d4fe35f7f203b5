// Command-line front end: every computation in the library behind
// reproducible flags.  Bare invocations use a fixed seed, so repeated runs
// (at any thread count) produce byte-identical output files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyface/ensembles.hpp"
#include "polyface/experiments.hpp"
#include "polyface/geometry.hpp"
#include "polyface/probcalc.hpp"
#include "polyface/rng.hpp"
#include "polyface/svg.hpp"

namespace {

using namespace polyface;

int exit_code = 0;

void fail_check(const std::string& message) {
    std::cerr << "CHECK FAILED: " << message << "\n";
    exit_code = 1;
}

std::string fixed10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10f", v);
    return buf;
}

EnsembleSpec parse_ensemble(const std::string& name, int rows, int cols, std::uint64_t seed) {
    if (name.rfind("adjoin:", 0) == 0) {
        return EnsembleSpec::adjoin_ones_around(ensemble_kind_from_string(name.substr(7)), rows, cols, seed);
    }
    if (name.rfind("sign:", 0) == 0) {
        return EnsembleSpec::sign_flips_of(ensemble_kind_from_string(name.substr(5)), rows, cols, seed);
    }
    return EnsembleSpec::make(ensemble_kind_from_string(name), rows, cols, seed);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

void emit_csv(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
        std::cout << "wrote " << path << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyface: face counts of randomly projected orthants, hypercubes, and simplices"};
    app.require_subcommand(1);

    std::uint64_t seed = kDefaultSeed;
    std::int64_t trials = 10000;
    double tol = kMarginTol;
    int threads = 0;
    app.add_option("--seed", seed, "random seed (fixed default keeps bare runs reproducible)")
        ->capture_default_str();
    app.add_option("--trials", trials, "Monte Carlo trial count")->capture_default_str();
    app.add_option("--tol", tol, "margin tolerance for survival verdicts")->capture_default_str();
    app.add_option("--threads", threads,
                   "worker threads (0 = POLYFACE_THREADS or 1); never affects results")
        ->capture_default_str();

    // wendel
    auto* cmd_wendel = app.add_subcommand("wendel", "halfspace probability P(m,M) [wendel_probability]");
    int w_m = 0, w_M = 1;
    bool w_exact = false;
    cmd_wendel->add_option("--m", w_m, "ambient dimension")->required();
    cmd_wendel->add_option("--M", w_M, "number of points")->required();
    cmd_wendel->add_flag("--exact", w_exact, "print the exact rational p/q");

    // ratio
    auto* cmd_ratio = app.add_subcommand("ratio", "expected face-survival ratio [expected_face_ratio]");
    DimensionSpec r_dims;
    std::string r_shape = "orthant";
    bool r_exact = false;
    cmd_ratio->add_option("--k", r_dims.k)->required();
    cmd_ratio->add_option("--n", r_dims.n)->required();
    cmd_ratio->add_option("--N", r_dims.N)->required();
    cmd_ratio->add_option("--shape", r_shape, "orthant|hypercube")->capture_default_str();
    cmd_ratio->add_flag("--exact", r_exact, "print the exact rational p/q");

    // threshold
    auto* cmd_threshold = app.add_subcommand("threshold", "threshold curves [rho_weak / rho_strong]");
    std::string t_which = "weak";
    double t_delta = -1.0;
    int t_sweep = 0;
    std::string t_out;
    cmd_threshold->add_option("--which", t_which, "weak|strong")->required();
    cmd_threshold->add_option("--delta", t_delta, "single evaluation point");
    cmd_threshold->add_option("--sweep", t_sweep, "emit a delta,rho table with this many points");
    cmd_threshold->add_option("--out", t_out, "CSV output path for --sweep");

    // area
    auto* cmd_area = app.add_subcommand("area", "area under the weak threshold curve [curve_area]");
    int a_points = 2000;
    cmd_area->add_option("--points", a_points, "quadrature panels")->capture_default_str();

    // mc
    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo face-survival frequency [mc_face_ratio]");
    DimensionSpec mc_dims;
    std::string mc_shape = "orthant", mc_ensemble = "gaussian", mc_out;
    cmd_mc->add_option("--k", mc_dims.k)->required();
    cmd_mc->add_option("--n", mc_dims.n)->required();
    cmd_mc->add_option("--N", mc_dims.N)->required();
    cmd_mc->add_option("--shape", mc_shape, "orthant|hypercube")->capture_default_str();
    cmd_mc->add_option("--ensemble", mc_ensemble,
                       "gaussian|uniform|rademacher|ternary|orthoprojector|fourier|adjoin:<kind>|sign:<kind>")
        ->capture_default_str();
    cmd_mc->add_option("--out", mc_out, "CSV output path (stdout when omitted)");

    // phase
    auto* cmd_phase = app.add_subcommand("phase", "phase-diagram grid [phase_diagram]");
    PhaseDiagramParams ph;
    std::string ph_shape = "orthant", ph_ensemble = "gaussian", ph_out, ph_svg;
    cmd_phase->add_option("--N", ph.N)->required();
    cmd_phase->add_option("--grid", ph.grid, "grid points per axis")->required();
    cmd_phase->add_option("--shape", ph_shape)->capture_default_str();
    cmd_phase->add_option("--ensemble", ph_ensemble)->capture_default_str();
    cmd_phase->add_option("--out", ph_out, "CSV output path");
    cmd_phase->add_option("--svg", ph_svg, "also render an SVG heatmap [emit_svg_heatmap]");

    // fourier
    auto* cmd_fourier = app.add_subcommand(
        "fourier", "partial Fourier neighborliness check [fourier_neighborliness]");
    int f_n = 5, f_N = 11, f_kmax = -1, f_samples = 1000;
    cmd_fourier->add_option("--n", f_n)->required();
    cmd_fourier->add_option("--N", f_N)->required();
    cmd_fourier->add_option("--kmax", f_kmax, "probe beyond the guaranteed (n-1)/2 range");
    cmd_fourier->add_option("--samples", f_samples, "highpass negativity spot-check draws")
        ->capture_default_str();

    // bijection
    auto* cmd_bijection = app.add_subcommand(
        "bijection", "adjoined-ones orthant/simplex face-count identity [adjoin_ones_bijection]");
    int b_N = 9, b_n = 5;
    cmd_bijection->add_option("--N", b_N)->required();
    cmd_bijection->add_option("--n", b_n)->required();

    // recover
    auto* cmd_recover = app.add_subcommand("recover", "planted-instance recovery [recovery_trial]");
    DimensionSpec rec_dims;
    std::string rec_kind = "sparse", rec_ensemble = "gaussian", rec_out;
    cmd_recover->add_option("--kind", rec_kind, "sparse|box")->capture_default_str();
    cmd_recover->add_option("--k", rec_dims.k)->required();
    cmd_recover->add_option("--n", rec_dims.n)->required();
    cmd_recover->add_option("--N", rec_dims.N)->required();
    cmd_recover->add_option("--ensemble", rec_ensemble)->capture_default_str();
    cmd_recover->add_option("--out", rec_out, "CSV output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunOptions opts;
        opts.tol = tol;
        opts.threads = threads;

        if (cmd_wendel->parsed()) {
            const WendelProb p = wendel_probability(w_m, w_M);
            if (w_exact) {
                if (!p.value_exact) throw std::runtime_error("M beyond the exact range");
                std::cout << rational_to_string(*p.value_exact) << "\n";
            } else {
                std::cout << format_double(p.value()) << "\n";
            }
        } else if (cmd_ratio->parsed()) {
            const Rational ratio = expected_face_ratio(r_dims, shape_from_string(r_shape));
            if (r_exact) {
                std::cout << rational_to_string(ratio) << "\n";
            } else {
                std::cout << format_double(ratio.convert_to<double>()) << "\n";
            }
        } else if (cmd_threshold->parsed()) {
            const bool strong = (t_which == "strong");
            if (!strong && t_which != "weak") throw std::runtime_error("--which must be weak or strong");
            if (t_sweep > 0) {
                std::ostringstream csv;
                csv << "# polyface threshold --which " << t_which << " --sweep " << t_sweep << "\n";
                csv << "delta,rho\n";
                for (int i = 1; i <= t_sweep; ++i) {
                    const double d = strong ? 0.5 + 0.5 * i / (t_sweep + 1.0) : i / (t_sweep + 1.0);
                    csv << format_double(d) << ','
                        << format_double(strong ? rho_strong(d) : rho_weak(d)) << '\n';
                }
                emit_csv(t_out, csv.str());
            } else {
                if (t_delta < 0) throw std::runtime_error("need --delta or --sweep");
                std::cout << fixed10(strong ? rho_strong(t_delta) : rho_weak(t_delta)) << "\n";
            }
        } else if (cmd_area->parsed()) {
            std::printf("%.6f\n", curve_area(ThresholdCurve::WeakHypercube, a_points));
        } else if (cmd_mc->parsed()) {
            const Shape shape = shape_from_string(mc_shape);
            const EnsembleSpec spec = parse_ensemble(mc_ensemble, mc_dims.n, mc_dims.N, seed);
            const TrialReport report = mc_face_ratio(mc_dims, shape, spec, trials, seed, opts);
            const std::vector<std::string> comments = {
                "polyface mc --shape " + mc_shape + " --ensemble " + mc_ensemble,
                "k=" + std::to_string(mc_dims.k) + " n=" + std::to_string(mc_dims.n) +
                    " N=" + std::to_string(mc_dims.N) + " trials=" + std::to_string(trials) +
                    " seed=" + std::to_string(seed) + " tol=" + format_double(tol),
                "predicted=" + rational_to_string(report.predicted),
            };
            emit_csv(mc_out, trial_reports_to_csv({report}, comments));
        } else if (cmd_phase->parsed()) {
            ph.trials = trials;
            ph.seed = seed;
            ph.shape = shape_from_string(ph_shape);
            ph.kind = ensemble_kind_from_string(ph_ensemble);
            const PhaseTable table = phase_diagram(ph, opts);
            const std::vector<std::string> comments = {
                "polyface phase --N " + std::to_string(ph.N) + " --grid " + std::to_string(ph.grid) +
                    " --shape " + ph_shape + " --ensemble " + ph_ensemble,
                "trials=" + std::to_string(trials) + " seed=" + std::to_string(seed) +
                    " tol=" + format_double(tol),
            };
            const std::string csv = phase_table_to_csv(table, comments);
            emit_csv(ph_out, csv);
            if (!ph_svg.empty()) {
                write_text_file(ph_svg, render_svg_heatmap(csv));
                std::cout << "wrote " << ph_svg << "\n";
            }
        } else if (cmd_fourier->parsed()) {
            const FourierReport report = fourier_neighborliness(f_n, f_N, tol, f_kmax);
            std::cout << "partial Fourier n=" << f_n << " N=" << f_N
                      << " (guaranteed survival for k <= " << report.neighborliness_bound << ")\n";
            for (const FourierFaceLine& line : report.lines) {
                std::cout << "k=" << line.k << ": survived " << line.count.survived << "/"
                          << line.count.total << " (indeterminate " << line.count.indeterminate
                          << ")\n";
            }
            const bool highpass = highpass_negativity_check(f_n, f_N, f_samples, seed);
            std::cout << "highpass negativity spot-check (" << f_samples << " samples): "
                      << (highpass ? "ok" : "VIOLATED") << "\n";
            if (!report.all_survive_below_bound || !report.zero_indeterminate_below_bound) {
                fail_check("a face at or below the guaranteed range did not survive cleanly");
            }
            if (!highpass) fail_check("highpass negativity violated");
        } else if (cmd_bijection->parsed()) {
            const BijectionReport report = adjoin_ones_bijection(b_N, b_n, trials, seed, opts);
            std::cout << "bijection n=" << b_n << " N=" << b_N << ": " << report.equal << "/"
                      << report.conclusive << " conclusive trials equal (" << report.trials
                      << " total)\n";
            if (!report.equality_in_all_conclusive()) {
                fail_check("face counts disagreed in a conclusive trial");
            }
        } else if (cmd_recover->parsed()) {
            RecoveryKind kind;
            if (rec_kind == "sparse" || rec_kind == "KSparseNonneg") {
                kind = RecoveryKind::KSparseNonneg;
            } else if (rec_kind == "box" || rec_kind == "KSimpleBox") {
                kind = RecoveryKind::KSimpleBox;
            } else {
                throw std::runtime_error("--kind must be sparse or box");
            }
            const EnsembleSpec spec = parse_ensemble(rec_ensemble, rec_dims.n, rec_dims.N, seed);
            const RecoveryReport report = recovery_trial(rec_dims, spec, kind, trials, seed, opts);
            const std::vector<std::string> comments = {
                "polyface recover --kind " + rec_kind + " --ensemble " + rec_ensemble,
                "k=" + std::to_string(rec_dims.k) + " n=" + std::to_string(rec_dims.n) +
                    " N=" + std::to_string(rec_dims.N) + " trials=" + std::to_string(trials) +
                    " seed=" + std::to_string(seed) + " tol=" + format_double(tol),
            };
            emit_csv(rec_out, recovery_reports_to_csv({report}, comments));
            std::cout << "successes " << report.successes << "/" << report.trials << ", certified "
                      << report.uniqueness_certified << ", lp_failures " << report.lp_failures
                      << ", certified_but_failed " << report.certified_but_failed << "\n";
            if (report.certified_but_failed > 0) {
                fail_check("a certified-unique instance failed recovery");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

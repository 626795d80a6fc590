// Command-line front end: convergence acceleration, Steffensen solving,
// Bernoulli/Hankel root extraction, separatrix shooting and the grid
// replication pipeline, all emitting deterministic CSV.
//
// Exit codes: 0 ok, 2 input/expression parse error, 3 input too short,
// 4 iteration limit reached, 5 non-finite evaluation, 6 root extraction did
// not converge, 7 integration/pipeline failure.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratit/accel.hpp"
#include "ratit/expr.hpp"
#include "ratit/fixpoint.hpp"
#include "ratit/ivp.hpp"
#include "ratit/lemaitre.hpp"
#include "ratit/polyroots.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitTooShort = 3;
constexpr int kExitMaxIter = 4;
constexpr int kExitNonFinite = 5;
constexpr int kExitNonConvergence = 6;
constexpr int kExitPipeline = 7;

std::string fmt(double v, int digits = 12) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// One real per line; '#' starts a comment; blank lines ignored.
std::vector<double> read_values(std::istream& in, std::string* error) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(a, b - a + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            values.push_back(v);
        } catch (const std::exception&) {
            *error = "parse error on line " + std::to_string(lineno) + ": '" + tok + "'";
            return {};
        }
    }
    return values;
}

int run_accelerate(const std::string& in_path, int depth, const std::string& out_path) {
    std::string err;
    std::vector<double> values;
    if (in_path.empty() || in_path == "-") {
        values = read_values(std::cin, &err);
    } else {
        std::ifstream f(in_path);
        if (!f) {
            std::cerr << "cannot open input file: " << in_path << "\n";
            return kExitParse;
        }
        values = read_values(f, &err);
    }
    if (!err.empty()) {
        std::cerr << err << "\n";
        return kExitParse;
    }

    ratit::AitkenTable table;
    try {
        table = ratit::iterated_aitken(ratit::RealSequence(values, 0), depth);
    } catch (const ratit::LengthError& e) {
        std::cerr << e.what() << "\n";
        return kExitTooShort;
    }

    Output out(out_path);
    std::ostream& os = out.stream();
    os << "n";
    for (int k = 0; k <= depth; ++k) os << ",row_" << k;
    os << ",degenerate\n";
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        os << i;
        bool any_cell = false, any_deg = false;
        for (int k = 0; k <= depth; ++k) {
            const auto& row = table.rows[static_cast<std::size_t>(k)];
            os << ",";
            if (i < row.size()) {
                os << fmt(row[i]);
                if (k > 0) any_cell = true;
                const auto& deg = table.degenerate[static_cast<std::size_t>(k)];
                if (std::find(deg.begin(), deg.end(), i) != deg.end()) any_deg = true;
            }
        }
        os << ",";
        if (any_cell) os << (any_deg ? "true" : "false");
        os << "\n";
    }
    return 0;
}

int run_steffensen(const std::string& map_src, double x0, double atol, double rtol, int maxit,
                   const std::string& out_path) {
    ratit::expr::Expression f;
    try {
        f = ratit::expr::Expression::parse(map_src);
    } catch (const ratit::expr::ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kExitParse;
    }
    ratit::SolveReport rep;
    try {
        rep = ratit::steffensen_solve([&](double x) { return f(x); }, x0, atol, rtol, maxit);
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitNonFinite;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }

    Output out(out_path);
    std::ostream& os = out.stream();
    os << "k,x_k,residual,degenerate\n";
    for (std::size_t k = 0; k < rep.trace.size(); ++k)
        os << k << "," << fmt(rep.trace[k]) << "," << fmt(rep.residuals[k]) << ","
           << (rep.step_degenerate[k] ? "true" : "false") << "\n";
    os << "# converged=" << (rep.converged ? 1 : 0) << " iterations=" << rep.iterations
       << " final_residual=" << fmt(rep.final_residual)
       << " degenerate_steps=" << rep.degenerate_steps << "\n";
    return rep.converged ? 0 : kExitMaxIter;
}

int run_roots(const std::string& coeffs_csv, int n, bool accelerate, const std::string& out_path) {
    std::vector<double> coeffs;
    {
        std::stringstream ss(coeffs_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                coeffs.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                std::cerr << "cannot parse coefficient '" << tok << "'\n";
                return kExitParse;
            }
        }
    }
    try {
        ratit::Polynomial p(coeffs);
        std::vector<ratit::RootEstimate> roots = ratit::all_roots(p, n, accelerate);
        Output out(out_path);
        std::ostream& os = out.stream();
        os << "modulus_rank,value,residual,converged\n";
        for (const auto& r : roots)
            os << r.modulus_rank << "," << fmt(r.value) << "," << fmt(r.residual) << ","
               << (r.converged ? "true" : "false") << "\n";
        return 0;
    } catch (const ratit::NonConvergenceError& e) {
        std::cerr << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
}

int run_shoot(double x_star, double rtol, double atol, const std::string& out_path,
              const std::string& traj_path) {
    try {
        if (x_star < 1.0) throw std::invalid_argument("shoot: x-star must be >= 1");
        ratit::IvpProblem prob{ratit::lemaitre_rhs, x_star, x_star, 0.0};
        ratit::Trajectory traj = ratit::rkf45_integrate(prob, rtol, atol);
        if (traj.terminated_by() != ratit::Termination::reached_end)
            throw std::runtime_error("integration failed: " + traj.note());
        Output out(out_path);
        out.stream() << "x_star,y0,accepted_steps,rejected_steps\n"
                     << fmt(x_star) << "," << fmt(traj.y_last()) << "," << traj.n_steps() << ","
                     << traj.n_rejected() << "\n";
        if (!traj_path.empty()) {
            Output tout(traj_path);
            tout.stream() << "x,y,h_accepted\n";
            for (std::size_t i = 0; i < traj.xs().size(); ++i)
                tout.stream() << fmt(traj.xs()[i]) << "," << fmt(traj.ys()[i]) << ","
                              << fmt(traj.h_accepted()[i]) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitPipeline;
    }
}

int run_replicate(double h, double x_hi, int series_order, int sweeps,
                  const std::string& out_path) {
    try {
        std::vector<ratit::ReplicateRow> rows = ratit::replicate_table(h, x_hi, series_order, sweeps);
        Output out(out_path);
        std::ostream& os = out.stream();
        os << "x,y1,y0,y2,y_rational,y_reference,flag_degenerate\n";
        for (const auto& r : rows)
            os << fmt(r.x) << "," << fmt(r.y1) << "," << fmt(r.y0) << "," << fmt(r.y2) << ","
               << fmt(r.y_rational) << "," << fmt(r.y_reference) << "," << (r.degenerate ? 1 : 0)
               << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitPipeline;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ratit - rational iteration toolkit: Aitken delta-squared acceleration, Steffensen "
        "fixed-point solving, Bernoulli/Hankel polynomial roots and the y' = 2y^2(y-x) "
        "replication pipeline"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help");  // frees -h/--h for the grid step

    std::string out_path;
    app.add_option("--out", out_path, "Output path ('-' or empty = stdout)")->capture_default_str();
    std::string format{"csv"};
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

    auto* acc = app.add_subcommand("accelerate", "Iterated Aitken delta-squared table of a sequence");
    std::string acc_in{"-"};
    int acc_depth = 1;
    acc->add_option("--in", acc_in, "Input file, one real per line, '#' comments");
    acc->add_option("--depth", acc_depth, "Number of repeated transforms")->check(CLI::PositiveNumber);

    auto* ste = app.add_subcommand("steffensen", "Steffensen fixed-point solve of x = f(x)");
    std::string ste_map;
    double ste_x0 = 0.0, ste_atol = 1e-12, ste_rtol = 0.0;
    int ste_maxit = 100;
    ste->add_option("--map", ste_map,
                    "f(x) over x, + - * / ^, cos sin exp log sqrt, numeric literals")
        ->required();
    ste->add_option("--x0", ste_x0, "Initial guess")->required();
    ste->add_option("--atol", ste_atol, "Absolute step tolerance")->capture_default_str();
    ste->add_option("--rtol", ste_rtol, "Relative step tolerance")->capture_default_str();
    ste->add_option("--max-iter", ste_maxit, "Outer iteration limit")->check(CLI::PositiveNumber);

    auto* rts = app.add_subcommand("roots", "All roots of a monic real polynomial");
    std::string rts_coeffs;
    int rts_n = 60;
    bool rts_accel = false;
    rts->add_option("--coeffs", rts_coeffs, "Ascending coefficients b0,b1,...,1")->required();
    rts->add_option("--n", rts_n, "Recurrent series length")->check(CLI::PositiveNumber);
    rts->add_flag("--accelerate", rts_accel, "Delta-squared accelerate the product ratios");

    auto* sht = app.add_subcommand("shoot", "Backward-shoot the separatrix of y' = 2y^2(y-x)");
    double sht_xstar = 10.0, sht_rtol = 1e-12, sht_atol = 1e-14;
    std::string sht_traj;
    sht->add_option("--x-star", sht_xstar, "Start abscissa, integrates y(x*)=x* down to 0")
        ->required();
    sht->add_option("--rtol", sht_rtol, "Relative tolerance")->capture_default_str();
    sht->add_option("--atol", sht_atol, "Absolute tolerance")->capture_default_str();
    sht->add_option("--trajectory-out", sht_traj, "Also dump the trajectory CSV (x,y,h_accepted)");

    auto* rep = app.add_subcommand("replicate", "Grid replication pipeline table");
    double rep_h = 0.1, rep_xhi = 3.0;
    int rep_order = 6, rep_sweeps = 1;
    rep->add_option("--h", rep_h, "Grid step")->capture_default_str();
    rep->add_option("--x-hi", rep_xhi, "Grid upper end")->capture_default_str();
    rep->add_option("--series-order", rep_order, "Asymptotic tail order")->capture_default_str();
    rep->add_option("--sweeps", rep_sweeps,
                    "Rational-iteration sweeps (values above 1 are experimental)")
        ->capture_default_str();

    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitParse;
    }

    if (acc->parsed()) return run_accelerate(acc_in, acc_depth, out_path);
    if (ste->parsed()) return run_steffensen(ste_map, ste_x0, ste_atol, ste_rtol, ste_maxit, out_path);
    if (rts->parsed()) return run_roots(rts_coeffs, rts_n, rts_accel, out_path);
    if (sht->parsed()) return run_shoot(sht_xstar, sht_rtol, sht_atol, out_path, sht_traj);
    if (rep->parsed()) return run_replicate(rep_h, rep_xhi, rep_order, rep_sweeps, out_path);
    return kExitParse;
}

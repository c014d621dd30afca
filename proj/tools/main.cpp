// unitfold command line tool.
//
// Subcommands: eval, sample, moment, fit, curves. Exit codes: 0 success,
// 2 usage or domain error, 3 numeric failure, 4 fit did not converge.

#include "CLI11.hpp"

#include "unitfold/dists.hpp"
#include "unitfold/errors.hpp"
#include "unitfold/mle.hpp"
#include "unitfold/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNoConverge = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FamilyParams {
    std::string family = "w";
    double alpha1 = 1.0, alpha2 = 1.0, lambda1 = 1.0, lambda2 = 1.0, r = 1.0;

    void attach(CLI::App* cmd, bool with_r = true) {
        cmd->add_option("--family", family, "Family: w or z")
            ->check(CLI::IsMember({"w", "z"}))
            ->required();
        cmd->add_option("--alpha1", alpha1, "First gamma shape")->required();
        cmd->add_option("--alpha2", alpha2, "Second gamma shape")->required();
        cmd->add_option("--lambda1", lambda1, "First gamma rate")->required();
        cmd->add_option("--lambda2", lambda2, "Second gamma rate")->required();
        if (with_r) cmd->add_option("--r", r, "Transform power")->required();
    }

    unitfold::Family fam() const {
        return family == "w" ? unitfold::Family::W : unitfold::Family::Z;
    }

    unitfold::UnitDistSpec spec() const {
        return unitfold::UnitDistSpec{fam(), {alpha1, alpha2, lambda1, lambda2}, {r}};
    }
};

// An output target that is stdout unless --out was given.
class OutFile {
  public:
    explicit OutFile(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::vector<double> parse_grid(const std::string& text) {
    double start = 0.0, stop = 0.0;
    long count = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &start, &stop, &count, &extra) != 3)
        throw std::invalid_argument("grid must have the form start:stop:count");
    if (count < 1) throw std::invalid_argument("grid count must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i)
        out.push_back(start + step * static_cast<double>(i));
    return out;
}

// One value per line; blank lines and # comments ignored. Malformed content
// or values outside the open unit interval report the offending line.
std::vector<double> read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open data file: " + path);
    std::vector<double> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line;
        const auto hash = body.find('#');
        if (hash != std::string::npos) body.erase(hash);
        std::size_t a = body.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = body.find_last_not_of(" \t\r");
        body = body.substr(a, b - a + 1);
        char* end = nullptr;
        const double v = std::strtod(body.c_str(), &end);
        if (end == body.c_str() || *end != '\0')
            throw std::invalid_argument("data file line " + std::to_string(lineno) +
                                        ": not a number: " + body);
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("data file line " + std::to_string(lineno) +
                                        ": value must lie strictly inside (0, 1)");
        out.push_back(v);
    }
    return out;
}

int cmd_eval(const FamilyParams& fp, const std::string& fn,
             const std::string& grid, const std::vector<double>& points,
             const std::string& out_path) {
    if (grid.empty() == points.empty())
        throw std::invalid_argument("exactly one of --grid or --points is required");
    const std::vector<double> xs = grid.empty() ? points : parse_grid(grid);
    const auto spec = fp.spec();
    spec.validate();
    OutFile out(out_path);
    std::ostream& os = out.stream();
    os << (fn == "quantile" ? "p,quantile" : "u,value") << "\n";
    for (double x : xs) {
        double y;
        if (fn == "pdf")
            y = unitfold::pdf(spec, x);
        else if (fn == "cdf")
            y = unitfold::cdf(spec, x);
        else
            y = unitfold::quantile(spec, x);
        os << fmt17(x) << "," << fmt17(y) << "\n";
    }
    return kExitOk;
}

int cmd_sample(const FamilyParams& fp, long n, unsigned long long seed,
               const std::string& out_path) {
    if (n < 1) throw std::invalid_argument("--n must be >= 1");
    const auto batch = unitfold::sample(fp.spec(), static_cast<std::size_t>(n),
                                        static_cast<std::uint64_t>(seed));
    OutFile out(out_path);
    std::ostream& os = out.stream();
    for (double v : batch.values) os << fmt17(v) << "\n";
    return kExitOk;
}

int cmd_moment(const FamilyParams& fp, int order, const std::string& method,
               const std::string& out_path) {
    unitfold::MomentRequest req;
    req.spec = fp.spec();
    req.order = order;
    req.method = method == "closed"  ? unitfold::MomentMethod::closed_form
                 : method == "quad"  ? unitfold::MomentMethod::quadrature
                                     : unitfold::MomentMethod::automatic;
    const auto res = unitfold::moment(req);
    OutFile out(out_path);
    std::ostream& os = out.stream();
    os << "value,method\n";
    os << fmt17(res.value) << ","
       << (res.used == unitfold::MomentMethod::closed_form ? "closed" : "quad")
       << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& family, const std::string& data_path,
            const std::string& profile, int starts, unsigned long long seed,
            const std::string& out_path) {
    const unitfold::Family fam =
        family == "w" ? unitfold::Family::W : unitfold::Family::Z;
    std::vector<double> data = read_data_file(data_path);
    unitfold::FitOptions opts;
    opts.profile = profile == "full" ? unitfold::FitProfile::full
                                     : unitfold::FitProfile::lambda1_fixed;
    opts.starts = starts;
    opts.seed = static_cast<std::uint64_t>(seed);
    opts.compute_std_errors = true;
    const auto fr = unitfold::fit(fam, data, opts);

    OutFile out(out_path);
    std::ostream& os = out.stream();
    os << "# unitfold fit report\n";
    os << "# family " << family << ", profile "
       << (opts.profile == unitfold::FitProfile::full ? "full" : "lambda1-fixed")
       << ", n " << data.size() << "\n";
    if (fr.converged)
        os << "# converged in " << fr.iterations << " iterations, score max-norm "
           << fmt17(fr.gradient_norm) << "\n";
    else
        os << "# DID NOT CONVERGE after " << fr.iterations
           << " iterations; best point so far follows\n";
    if (opts.profile == unitfold::FitProfile::full)
        os << "# warning: the likelihood is flat under joint rate scaling; only\n"
           << "# lambda2/lambda1 is determined and the hessian is singular\n";
    if (fr.hessian_singular)
        os << "# standard errors unavailable: observed information is singular\n";
    os << "[result]\n";
    os << "family = " << family << "\n";
    os << "profile = "
       << (opts.profile == unitfold::FitProfile::full ? "full" : "lambda1-fixed")
       << "\n";
    os << "n = " << data.size() << "\n";
    os << "alpha1 = " << fmt17(fr.theta.alpha1) << "\n";
    os << "alpha2 = " << fmt17(fr.theta.alpha2) << "\n";
    os << "lambda1 = " << fmt17(fr.theta.lambda1) << "\n";
    os << "lambda2 = " << fmt17(fr.theta.lambda2) << "\n";
    os << "r = " << fmt17(fr.theta.r) << "\n";
    os << "loglik = " << fmt17(fr.loglik) << "\n";
    os << "converged = " << (fr.converged ? 1 : 0) << "\n";
    os << "iterations = " << fr.iterations << "\n";
    os << "gradient_norm = " << fmt17(fr.gradient_norm) << "\n";
    os << "best_start = " << fr.best_start << "\n";
    os << "hessian_singular = " << (fr.hessian_singular ? 1 : 0) << "\n";
    if (fr.std_errors) {
        const auto& se = *fr.std_errors;
        os << "se_alpha1 = " << fmt17(se[0]) << "\n";
        os << "se_alpha2 = " << fmt17(se[1]) << "\n";
        os << "se_lambda1 = " << fmt17(se[2]) << "\n";
        os << "se_lambda2 = " << fmt17(se[3]) << "\n";
        os << "se_r = " << fmt17(se[4]) << "\n";
    }
    return fr.converged ? kExitOk : kExitNoConverge;
}

struct CurveSet {
    std::string family;
    double alpha1, alpha2, lambda1, lambda2;
};

std::vector<CurveSet> builtin_curve_grid() {
    std::vector<CurveSet> out;
    for (const char* fam : {"w", "z"}) {
        out.push_back({fam, 1.0, 1.0, 1.0, 1.0});
        out.push_back({fam, 2.0, 3.0, 1.0, 1.5});
        out.push_back({fam, 0.8, 1.6, 1.0, 3.0});
        out.push_back({fam, 5.0, 2.0, 1.0, 0.7});
    }
    return out;
}

std::vector<CurveSet> read_curve_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open grid file: " + path);
    std::vector<CurveSet> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        CurveSet cs;
        if (!(ss >> cs.family)) continue;
        if (cs.family != "w" && cs.family != "z")
            throw std::invalid_argument("grid file line " + std::to_string(lineno) +
                                        ": family must be w or z");
        if (!(ss >> cs.alpha1 >> cs.alpha2 >> cs.lambda1 >> cs.lambda2))
            throw std::invalid_argument(
                "grid file line " + std::to_string(lineno) +
                ": expected `family alpha1 alpha2 lambda1 lambda2`");
        out.push_back(cs);
    }
    if (out.empty()) throw std::invalid_argument("grid file has no parameter sets");
    return out;
}

// u-grid graded toward both edges, denser where the density has a spike:
// each half is warped by t^e with e chosen from the edge power so that the
// trapezoid rule over the emitted points still integrates the spike.
std::vector<double> curve_grid_points(const unitfold::UnitDistSpec& spec, int count) {
    const auto ep = unitfold::edge_powers(spec);
    const double e0 = std::max(1.0, 3.0 / ep.first);
    const double e1 = std::max(1.0, 3.0 / ep.second);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
        const double u = t < 0.5 ? 0.5 * std::pow(2.0 * t, e0)
                                 : 1.0 - 0.5 * std::pow(2.0 * (1.0 - t), e1);
        out.push_back(u);
    }
    return out;
}

int cmd_curves(double r, const std::string& grid_path, const std::string& out_path) {
    const std::vector<CurveSet> sets =
        grid_path.empty() ? builtin_curve_grid() : read_curve_grid(grid_path);
    OutFile out(out_path);
    std::ostream& os = out.stream();
    os << "family,alpha1,alpha2,lambda1,lambda2,r,u,pdf\n";
    for (const auto& cs : sets) {
        unitfold::UnitDistSpec spec{
            cs.family == "w" ? unitfold::Family::W : unitfold::Family::Z,
            {cs.alpha1, cs.alpha2, cs.lambda1, cs.lambda2},
            {r}};
        for (double u : curve_grid_points(spec, 512)) {
            os << cs.family << "," << fmt17(cs.alpha1) << "," << fmt17(cs.alpha2)
               << "," << fmt17(cs.lambda1) << "," << fmt17(cs.lambda2) << ","
               << fmt17(r) << "," << fmt17(u) << ","
               << fmt17(unitfold::pdf(spec, u)) << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributions on the unit interval from folded gamma ratios"};
    app.require_subcommand(1);

    FamilyParams ep;
    std::string eval_fn = "pdf", eval_grid, eval_out;
    std::vector<double> eval_points;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate pdf, cdf, or quantile");
    ep.attach(eval_cmd);
    eval_cmd->add_option("--fn", eval_fn, "Function: pdf, cdf, or quantile")
        ->check(CLI::IsMember({"pdf", "cdf", "quantile"}));
    eval_cmd->add_option("--grid", eval_grid, "Evaluation grid start:stop:count");
    eval_cmd->add_option("--points", eval_points, "Explicit evaluation points");
    eval_cmd->add_option("--out", eval_out, "Output file (default stdout)");

    FamilyParams sp;
    long sample_n = 0;
    unsigned long long sample_seed = 0;
    std::string sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "Draw exact samples");
    sp.attach(sample_cmd);
    sample_cmd->add_option("--n", sample_n, "Number of draws")->required();
    sample_cmd->add_option("--seed", sample_seed, "Random seed")->required();
    sample_cmd->add_option("--out", sample_out, "Output file (default stdout)");

    FamilyParams mp;
    int moment_order = 1;
    std::string moment_method = "auto", moment_out;
    auto* moment_cmd = app.add_subcommand("moment", "Raw moment of the family");
    mp.attach(moment_cmd);
    moment_cmd->add_option("--order", moment_order, "Moment order (>= 1)");
    moment_cmd->add_option("--method", moment_method, "auto, closed, or quad")
        ->check(CLI::IsMember({"auto", "closed", "quad"}));
    moment_cmd->add_option("--out", moment_out, "Output file (default stdout)");

    std::string fit_family, fit_data, fit_profile = "lambda1-fixed", fit_out;
    int fit_starts = 5;
    unsigned long long fit_seed = 20240901ULL;
    auto* fit_cmd = app.add_subcommand("fit", "Maximum likelihood fit from a data file");
    fit_cmd->add_option("--family", fit_family, "Family: w or z")
        ->check(CLI::IsMember({"w", "z"}))
        ->required();
    fit_cmd->add_option("--data", fit_data, "Data file, one value per line")->required();
    fit_cmd->add_option("--profile", fit_profile, "full or lambda1-fixed")
        ->check(CLI::IsMember({"full", "lambda1-fixed"}));
    fit_cmd->add_option("--starts", fit_starts, "Number of optimizer starts");
    fit_cmd->add_option("--seed", fit_seed, "Seed for start jitter");
    fit_cmd->add_option("--out", fit_out, "Output file (default stdout)");

    double curves_r = 0.5;
    std::string curves_grid, curves_out;
    auto* curves_cmd = app.add_subcommand("curves", "Emit density curves as CSV");
    curves_cmd->add_option("--r", curves_r, "Transform power for all curves");
    curves_cmd->add_option("--grid-file", curves_grid,
                           "Parameter sets, one `family a1 a2 l1 l2` per line");
    curves_cmd->add_option("--out", curves_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (eval_cmd->parsed())
            return cmd_eval(ep, eval_fn, eval_grid, eval_points, eval_out);
        if (sample_cmd->parsed())
            return cmd_sample(sp, sample_n, sample_seed, sample_out);
        if (moment_cmd->parsed())
            return cmd_moment(mp, moment_order, moment_method, moment_out);
        if (fit_cmd->parsed())
            return cmd_fit(fit_family, fit_data, fit_profile, fit_starts, fit_seed,
                           fit_out);
        if (curves_cmd->parsed())
            return cmd_curves(curves_r, curves_grid, curves_out);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const unitfold::QuadratureError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const unitfold::RootBracketError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const unitfold::NonConvergenceError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const unitfold::SingularHessianError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

#include "tecost/cli.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tecost/channel_io.hpp"
#include "tecost/cost.hpp"
#include "tecost/dilation.hpp"
#include "tecost/oracle.hpp"

namespace tecost::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(12) << x;
    return os.str();
}

CVec canonical_trace_vector(const KrausChannel& ch) { return kraus_traces(canonical_form(ch)); }

RunReport base_report(const KrausChannel& ch) {
    RunReport r;
    r.n = ch.dim();
    r.d = ch.count();
    r.canonical_traces = canonical_trace_vector(ch);
    return r;
}

SolverConfig config_from(const Flags& f) {
    SolverConfig c;
    c.seed = f.seed;
    return c;
}

CostResult run_method(const KrausChannel& ch, const Flags& f) {
    const SolverConfig cfg = config_from(f);
    if (f.method == "auto") return cost(ch, cfg);
    if (f.method == "sdp") return solve_sdp_cost(ch, cfg);
    if (f.method == "subgrad") return solve_supergradient(ch, cfg);
    if (f.method == "closed") {
        try {
            return cost_closed(ch);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    throw UsageError("unknown method \"" + f.method + "\" (expected auto, sdp, subgrad or closed)");
}

void fill_cost(RunReport& r, const CostResult& c) {
    r.angle = c.angle;
    r.cos = c.cos_value;
    r.method = method_name(c.method);
    r.lower = c.lower_bracket;
    r.upper = c.upper_bracket;
    if (!std::isnan(c.sdp_value) && !std::isnan(c.supergradient_value))
        r.residuals["solver_gap"] = std::abs(c.sdp_value - c.supergradient_value);
}

void check_tol(const KrausChannel& ch, const Flags& f) {
    const std::string why = channel_defect(ch.dim(), ch.ops(), f.tol);
    if (!why.empty()) throw FormatError("invalid channel at --tol " + fmt(f.tol) + ": " + why);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

json RunReport::to_json() const {
    json traces = json::array();
    for (const auto& t : canonical_traces) traces.push_back({t.real(), t.imag()});
    json j = {{"n", n},
              {"d", d},
              {"canonical_traces", traces},
              {"angle", opt(angle)},
              {"cos", opt(cos)},
              {"method", method},
              {"lower", opt(lower)},
              {"upper", opt(upper)},
              {"fidelity_oracle", opt(fidelity_oracle)},
              {"residuals", residuals},
              {"wall_time", wall_time}};
    if (lower_bound) j["lower_bound"] = *lower_bound;
    if (heuristic_upper) j["heuristic_upper"] = *heuristic_upper;
    if (maxnorm) j["maxnorm"] = *maxnorm;
    return j;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "n " << n << "\nd " << d << '\n';
    if (lower_bound) os << "lower_bound " << fmt(*lower_bound) << '\n';
    if (angle) os << "angle " << fmt(*angle) << '\n';
    if (heuristic_upper) os << "heuristic_upper " << fmt(*heuristic_upper) << '\n';
    if (cos) os << "cos " << fmt(*cos) << '\n';
    if (!method.empty()) os << "method " << method << '\n';
    if (lower) os << "lower " << fmt(*lower) << '\n';
    if (upper) os << "upper " << fmt(*upper) << '\n';
    if (maxnorm) os << "maxnorm " << fmt(*maxnorm) << '\n';
    if (fidelity_oracle) os << "fidelity_oracle " << fmt(*fidelity_oracle) << '\n';
    for (auto it = residuals.begin(); it != residuals.end(); ++it)
        os << it.key() << ' ' << std::scientific << std::setprecision(3) << it.value().get<double>() << std::fixed
           << '\n';
    os << "wall_time " << std::fixed << std::setprecision(3) << wall_time << '\n';
    return os.str();
}

RunReport cmd_cost(const KrausChannel& ch, const Flags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    check_tol(ch, f);
    RunReport r = base_report(ch);
    fill_cost(r, run_method(ch, f));
    r.wall_time = seconds_since(t0);
    return r;
}

RunReport cmd_fidelity(const KrausChannel& ch, const Flags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    check_tol(ch, f);
    RunReport r = base_report(ch);
    fill_cost(r, run_method(ch, f));
    if (f.oracle > 0) {
        const OracleEstimate e = oracle_fidelity(ch, f.oracle, f.seed);
        r.fidelity_oracle = e.value;
        r.residuals["fidelity_gap"] = e.value - *r.cos;
    }
    r.wall_time = seconds_since(t0);
    return r;
}

RunReport cmd_bounds(const KrausChannel& ch, const Flags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    check_tol(ch, f);
    RunReport r = base_report(ch);
    fill_cost(r, run_method(ch, f));
    r.lower_bound = lower_bound(ch);
    r.heuristic_upper = heuristic_upper_bound(ch);
    r.wall_time = seconds_since(t0);
    return r;
}

RunReport cmd_dilate(const KrausChannel& ch, const std::string& out, const Flags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    check_tol(ch, f);
    RunReport r = base_report(ch);
    const CostResult c = run_method(ch, f);
    fill_cost(r, c);
    const DilationResult dil = optimal_extension(ch, c);
    write_unitary_file(out, dil.u);
    r.maxnorm = dil.maxnorm;
    r.residuals["choi"] = max_abs_diff(choi(extension_channel(dil.u, ch.dim())), choi(ch));
    r.residuals["unitarity"] = max_abs_diff(dil.u.adjoint() * dil.u, Matrix::identity(dil.u.rows()));
    r.wall_time = seconds_since(t0);
    return r;
}

KrausChannel cmd_gen(const std::string& family, const GenParams& gp) {
    try {
        if (family == "depolarizing") return make_depolarizing(gp.n, gp.p);
        if (family == "projector") return make_block_projector_channel(gp.n, gp.r);
        if (family == "random") return make_random_channel(gp.n, gp.d, gp.seed);
        if (family == "identity") return make_identity_channel(gp.n);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown family \"" + family + "\" (expected depolarizing, projector, random or identity)");
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Time-energy cost of quantum channels in Kraus form"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--method", f.method, "Solver: auto, sdp, subgrad or closed")
        ->check(CLI::IsMember({"auto", "sdp", "subgrad", "closed"}));
    app.add_option("--tol", f.tol, "Trace-preservation tolerance for the input channel");
    app.add_option("--oracle", f.oracle, "Fidelity oracle sample count (fidelity command)");
    app.add_option("--seed", f.seed, "Seed for randomized steps");
    app.add_flag("--json", f.json, "Emit one JSON object");

    std::string file, out;
    auto* c_cost = app.add_subcommand("cost", "Compute the cost angle");
    c_cost->add_option("file", file, "Channel JSON file")->required();
    auto* c_fid = app.add_subcommand("fidelity", "Worst-case entanglement fidelity cos(cost)");
    c_fid->add_option("file", file, "Channel JSON file")->required();
    auto* c_bounds = app.add_subcommand("bounds", "Trace lower bound, cost, heuristic upper bound");
    c_bounds->add_option("file", file, "Channel JSON file")->required();
    auto* c_dil = app.add_subcommand("dilate", "Write a minimal-cost unitary extension");
    c_dil->add_option("file", file, "Channel JSON file")->required();
    c_dil->add_option("--out", out, "Output unitary JSON file")->required();

    std::string family;
    GenParams gp;
    auto* c_gen = app.add_subcommand("gen", "Write a channel from a standard family");
    c_gen->add_option("family", family, "depolarizing, projector, random or identity")->required();
    c_gen->add_option("--n", gp.n, "System dimension");
    c_gen->add_option("--p", gp.p, "Depolarizing strength");
    c_gen->add_option("--r", gp.r, "Projector rank");
    c_gen->add_option("--d", gp.d, "Number of Kraus operators (random)");
    c_gen->add_option("--out", out, "Output file (stdout when omitted)");
    c_gen->add_option("--seed", gp.seed, "Seed (random)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (c_gen->parsed()) {
            const KrausChannel ch = cmd_gen(family, gp);
            if (out.empty()) std::cout << channel_to_string(ch);
            else write_channel_file(out, ch);
            return kOk;
        }
        const KrausChannel ch = read_channel_file(file);
        RunReport r;
        if (c_cost->parsed()) r = cmd_cost(ch, f);
        else if (c_fid->parsed()) r = cmd_fidelity(ch, f);
        else if (c_bounds->parsed()) r = cmd_bounds(ch, f);
        else r = cmd_dilate(ch, out, f);
        if (f.json) std::cout << std::setprecision(17) << r.to_json().dump() << '\n';
        else std::cout << r.to_text();
        return kOk;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const SolverDisagreement& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const BarrierFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const GramMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kGramMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverFailure;
    }
}

}  // namespace tecost::cli

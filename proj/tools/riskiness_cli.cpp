// Command line front end: riskiness computations, parameter sweeps, dyadic
// approximation reports, conditional riskiness on trees, and wealth
// simulations, all driven by JSON inputs.
//
// Exit codes: 0 success, 2 invalid input, 3 unresolvable boundary sign,
// 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "riskiness/json_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitAmbiguous = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string gamble_file;
    std::string sweep_file;
    std::string out_file;
    double tol = 1e-10;
    int n_max = 0;  // 0 = choose by support kind
    std::optional<std::uint64_t> seed;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // keep LF endings everywhere
    if (!os) throw riskiness::Error("cannot open output file: " + path);
    return os;
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out_file.empty()) {
        std::cout << text;
        if (!std::cout) throw riskiness::Error("write to stdout failed");
        return;
    }
    auto os = open_out(opt.out_file);
    os << text;
    if (!os) throw riskiness::Error("write failed: " + opt.out_file);
}

int cmd_validate(const Options& opt) {
    auto g = riskiness::parse_gamble(riskiness::load_json_file(opt.gamble_file));
    auto stats = riskiness::validate(g);
    emit(opt, riskiness::to_json(stats).dump(2) + "\n");
    return kExitOk;
}

int cmd_riskiness(const Options& opt) {
    auto g = riskiness::parse_gamble(riskiness::load_json_file(opt.gamble_file));
    auto r = riskiness::riskiness(g, opt.tol);
    emit(opt, riskiness::to_json(r).dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    auto spec = riskiness::parse_sweep_spec(riskiness::load_json_file(opt.sweep_file));
    auto rows = riskiness::run_sweep(spec, opt.tol);
    if (opt.out_file.empty()) {
        riskiness::write_sweep_csv(std::cout, rows);
    } else {
        auto os = open_out(opt.out_file);
        riskiness::write_sweep_csv(os, rows);
        if (!os) throw riskiness::Error("write failed: " + opt.out_file);
    }
    return kExitOk;
}

int cmd_approx(const Options& opt) {
    auto g = riskiness::parse_gamble(riskiness::load_json_file(opt.gamble_file));
    const auto* density = std::get_if<riskiness::DensityGamble>(&g);
    if (!density)
        throw riskiness::NotAGamble("dyadic approximation requires a density gamble");
    int n_max = opt.n_max;
    if (n_max <= 0)
        n_max = riskiness::support_kind(*density) == riskiness::SupportKind::Compact ? 15 : 12;
    auto rep = riskiness::lambda_sequence(*density, n_max, opt.tol);
    if (!opt.out_file.empty()) {
        auto os = open_out(opt.out_file);
        riskiness::write_convergence_csv(os, rep);
        if (!os) throw riskiness::Error("write failed: " + opt.out_file);
    }
    std::cout << riskiness::to_json(rep).dump(2) << "\n";
    return kExitOk;
}

int cmd_tree(const Options& opt) {
    auto tree = riskiness::parse_tree(riskiness::load_json_file(opt.gamble_file));
    auto process = riskiness::riskiness_process(tree, opt.tol);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string table = "depth\tnode\tmax_loss\trho\tlambda\tregime\tresidual\n";
    for (const auto& e : process.entries) {
        table += std::to_string(e.depth) + "\t" + e.path + "\t" + num(e.max_loss) + "\t" +
                 num(e.result.rho) + "\t" + num(e.result.lambda) + "\t" +
                 riskiness::regime_name(e.result.regime) + "\t" + num(e.result.residual) +
                 "\n";
    }
    emit(opt, table);
    return kExitOk;
}

int cmd_simulate(const Options& opt) {
    auto spec = riskiness::parse_simulation_spec(riskiness::load_json_file(opt.gamble_file));
    if (opt.seed) spec.seed = *opt.seed;
    auto stats = riskiness::simulate(spec);
    if (!opt.out_file.empty()) {
        auto os = open_out(opt.out_file);
        char buf[64];
        auto num = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        os << "path,t,wealth\n";
        const int dump = std::min(spec.csv_paths, spec.paths);
        for (int p = 0; p < dump; ++p) {
            auto traj = riskiness::simulate_trajectory(spec, p);
            for (std::size_t t = 0; t < traj.size(); ++t)
                os << p << ',' << (t + 1) << ',' << num(traj[t]) << "\n";
        }
        if (!os) throw riskiness::Error("write failed: " + opt.out_file);
    }
    std::cout << riskiness::to_json(stats, spec).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operational riskiness of gambles: the reserve level above which "
                 "taking the gamble never risks bankruptcy"};
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed_value = 0;

    auto add_common = [&](CLI::App* sub, bool needs_gamble) {
        if (needs_gamble)
            sub->add_option("--gamble", opt.gamble_file, "input JSON file")->required();
        sub->add_option("--out", opt.out_file, "output file (default: stdout)");
        sub->add_option("--tol", opt.tol, "root residual tolerance")
            ->check(CLI::PositiveNumber);
    };

    auto* validate = app.add_subcommand("validate", "check gamble preconditions, print stats");
    add_common(validate, true);
    auto* risk = app.add_subcommand("riskiness", "compute the riskiness measure");
    add_common(risk, true);
    auto* sweep = app.add_subcommand("sweep", "riskiness across a parameter grid (CSV)");
    sweep->add_option("--sweep", opt.sweep_file, "sweep spec JSON file")->required();
    sweep->add_option("--out", opt.out_file, "output CSV (default: stdout)");
    sweep->add_option("--tol", opt.tol, "root residual tolerance")->check(CLI::PositiveNumber);
    auto* approx = app.add_subcommand("approx", "dyadic approximation levels (CSV + summary)");
    add_common(approx, true);
    approx->add_option("--n-max", opt.n_max, "deepest dyadic level")
        ->check(CLI::Range(1, 24));
    auto* tree = app.add_subcommand("tree", "conditional riskiness at every tree node");
    add_common(tree, true);
    auto* simulate = app.add_subcommand("simulate", "no-bankruptcy wealth simulation");
    add_common(simulate, true);
    auto* seed_opt = simulate->add_option("--seed", seed_value, "override the spec's RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    if (*seed_opt) opt.seed = seed_value;

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (risk->parsed()) return cmd_riskiness(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (approx->parsed()) return cmd_approx(opt);
        if (tree->parsed()) return cmd_tree(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
    } catch (const riskiness::BoundarySignAmbiguous& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAmbiguous;
    } catch (const riskiness::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::NotAGamble& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::NotConditionalGamble& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::NotYetAGamble& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::SpecInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::OutOfDomain& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::InsufficientEvents& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const riskiness::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "plcycles/commands.hpp"
#include "plcycles/errors.hpp"

namespace {

enum Exit { kPass = 0, kUsage = 1, kNumerical = 2, kMismatch = 3 };

struct Overrides {
    std::optional<int> k;
    std::string parity;
    std::vector<int> p;
    std::vector<double> targets;
};

plc::ExperimentConfig make_config(const std::string& path, const Overrides& o) {
    plc::ExperimentConfig cfg = path.empty() ? plc::ExperimentConfig{} : plc::load_config(path);
    if (o.k) {
        if (*o.k < 1) throw plc::UsageError("--k: must be >= 1");
        cfg.k = *o.k;
    }
    if (!o.parity.empty()) {
        try {
            cfg.parity = plc::parse_parity(o.parity);
        } catch (const std::invalid_argument&) {
            throw plc::UsageError("--parity: expected odd or even");
        }
    }
    if (!o.p.empty()) cfg.p = o.p;
    if (!o.targets.empty()) cfg.targets = o.targets;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit cycles of piecewise-linear systems split by an algebraic curve"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, format_name;
    int threads = 1;
    app.add_option("--config", config_path, "experiment configuration (JSON)");
    app.add_option("--out", out_path, "write output here instead of stdout");
    app.add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    Overrides ov;
    auto add_k = [&](CLI::App* sc) { sc->add_option("--k", ov.k, "degree parameter k"); };
    auto add_parity = [&](CLI::App* sc) { sc->add_option("--parity", ov.parity, "odd or even"); };

    auto* mel = app.add_subcommand("mel-eval", "M2 by closed form and by quadrature on a u-grid");
    auto* lem = app.add_subcommand("lemma-exponents", "exponent lattice and collision classes");
    auto* cert = app.add_subcommand("certify-ect", "Wronskian certificate of the G-basis");
    auto* real = app.add_subcommand("realize", "Lambda with prescribed simple Melnikov zeros");
    auto* sim = app.add_subcommand("simulate", "Filippov simulation and return-map cycle search");
    auto* hopf = app.add_subcommand("pseudo-hopf", "mu sweep for the pseudo-Hopf cycle");
    auto* thm = app.add_subcommand("theorem-check", "full pipeline for the maximal-cycle construction at one (k, parity)");
    for (auto* sc : {mel, lem, cert, real, sim, hopf, thm}) {
        add_k(sc);
        add_parity(sc);
    }
    for (auto* sc : {mel, cert, real, sim, hopf}) sc->add_option("--p", ov.p, "p-list");
    for (auto* sc : {mel, real, sim}) sc->add_option("--targets", ov.targets, "Melnikov zeros u*");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }

    try {
        const plc::ExperimentConfig cfg = make_config(config_path, ov);
        plc::RunContext ctx;
        ctx.threads = threads;
        plc::CommandResult res;
        plc::Format def = plc::Format::Json;
        if (mel->parsed()) {
            res = plc::cmd_mel_eval(cfg, ctx);
            def = plc::Format::Csv;
        } else if (lem->parsed()) {
            res = plc::cmd_lemma_exponents(cfg.k, cfg.parity);
        } else if (cert->parsed()) {
            res = plc::cmd_certify_ect(cfg.k, cfg.p_list());
        } else if (real->parsed()) {
            if (!cfg.targets) throw plc::UsageError("realize: no targets (use --targets or the config)");
            res = plc::cmd_realize(cfg.k, cfg.p_list(), *cfg.targets);
        } else if (sim->parsed()) {
            res = plc::cmd_simulate(cfg, ctx);
        } else if (hopf->parsed()) {
            res = plc::cmd_pseudo_hopf(cfg, ctx);
        } else {
            res = plc::cmd_theorem_check(cfg.k, cfg.parity, ctx);
        }
        const plc::Format fmt =
            format_name.empty() ? def : (format_name == "csv" ? plc::Format::Csv : plc::Format::Json);
        const std::string text = res.render(fmt);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw plc::UsageError("cannot write '" + out_path + "'");
            f << text;
        }
        return res.status;
    } catch (const plc::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const plc::VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kMismatch;
    } catch (const plc::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}

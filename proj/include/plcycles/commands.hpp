#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "plcycles/config.hpp"

namespace plc {

inline constexpr const char* kSchemaVersion = "1.0";

enum class Format { Csv, Json };

struct RunContext {
    Format format = Format::Json;
    int threads = 1;
};

// status: 0 pass, 3 verification mismatch (usage and numerical failures throw)
struct CommandResult {
    nlohmann::json doc;
    std::string csv;
    int status = 0;

    std::string render(Format f) const;
};

// 17 significant digits, "nan"/"inf" spelled out
std::string fmt17(double v);

CommandResult cmd_mel_eval(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_lemma_exponents(int k, Parity parity);
CommandResult cmd_certify_ect(int k, const std::vector<int>& p);
CommandResult cmd_realize(int k, const std::vector<int>& p, const std::vector<double>& targets);
CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunContext& ctx);
CommandResult cmd_pseudo_hopf(const ExperimentConfig& cfg, const RunContext& ctx);

struct TheoremCheckOptions {
    double target_fraction = 0.9;  // targets evenly spaced in (0, fraction * b0)
    double hopf_eps = 0.1;
    double hopf_gamma = 40.0;
    std::vector<double> hopf_mu{-0.01, -0.005, -0.001, 0.001, 0.005, 0.01};
};

// k is the degree parameter of the family: odd -> degree 2k+1, even -> degree 2k
CommandResult cmd_theorem_check(int k, Parity parity, const RunContext& ctx, const TheoremCheckOptions& opts = {});

}  // namespace plc

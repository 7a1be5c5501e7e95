// Copyright 2026 The MiniP4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "minip4/campaign.h"
#include "minip4/equiv.h"
#include "minip4/generator.h"
#include "minip4/mbt.h"
#include "minip4/parser.h"
#include "minip4/passes.h"
#include "minip4/printer.h"
#include "minip4/semantics.h"
#include "minip4/smt.h"

namespace {

constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Parse + typecheck, printing diagnostics in file:line:col form.
std::optional<minip4::TypedProgram> load_program(const std::string& path, int& exit_code) {
    std::string text = read_file(path);
    minip4::ParseResult pr = minip4::parse_program(text);
    if (!pr.ok()) {
        for (const auto& d : pr.diags) std::cerr << d.render(path) << "\n";
        exit_code = kExitFindings;
        return std::nullopt;
    }
    minip4::TypecheckResult tr = minip4::typecheck(std::move(*pr.program));
    for (const auto& d : tr.diags) std::cerr << d.render(path) << "\n";
    if (!tr.ok()) {
        exit_code = kExitFindings;
        return std::nullopt;
    }
    return std::move(tr.typed);
}

minip4::passes::BugSet parse_bugs(const std::vector<std::string>& ids, int& exit_code) {
    minip4::passes::BugSet bugs;
    for (const auto& id : ids) {
        if (!minip4::passes::find_bug(id)) {
            std::cerr << "unknown bug id '" << id << "'; known ids:\n";
            for (const auto& b : minip4::passes::bug_catalog())
                std::cerr << "  " << b.id << "\n";
            exit_code = kExitUsage;
            return {};
        }
        bugs.insert(id);
    }
    return bugs;
}

void print_finding(const minip4::equiv::Finding& f) {
    std::cout << (f.kind == minip4::equiv::Finding::Kind::Unstable ? "warning: " : "finding: ")
              << minip4::equiv::to_string(f.kind) << " in pass " << f.pass;
    if (!f.control.empty()) std::cout << " (control " << f.control << ")";
    if (!f.detail.empty()) std::cout << ": " << f.detail;
    std::cout << "\n";
    if (f.cex) {
        std::cout << "  counterexample:";
        for (const auto& [k, v] : f.cex->inputs) std::cout << " " << k << "=" << v;
        std::cout << "\n";
        for (size_t i = 0; i < f.cex->before_out.size(); ++i) {
            if (f.cex->before_out[i].second != f.cex->after_out[i].second)
                std::cout << "    " << f.cex->before_out[i].first << ": before="
                          << f.cex->before_out[i].second
                          << " after=" << f.cex->after_out[i].second << "\n";
        }
    }
}

int findings_exit_code(const std::vector<minip4::equiv::Finding>& findings) {
    for (const auto& f : findings) {
        if (f.kind != minip4::equiv::Finding::Kind::Unstable) return kExitFindings;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MiniP4 compiler and compiler-bug-finding suite"};
    app.require_subcommand(1);

    // ----------------------------------------------------------- check ----
    auto* check = app.add_subcommand("check", "parse and typecheck a program");
    std::string check_file;
    bool dump_semantics = false;
    bool dump_smt_text = false;
    check->add_option("file", check_file)->required();
    check->add_flag("--dump-semantics", dump_semantics,
                    "print the functional form of each pipeline control");
    check->add_flag("--dump-smt", dump_smt_text,
                    "with --dump-semantics, also print SMT-LIB2 definitions");

    // --------------------------------------------------------- compile ----
    auto* compile = app.add_subcommand("compile", "run the pass pipeline");
    std::string compile_file, dump_passes_dir;
    std::vector<std::string> compile_bugs;
    compile->add_option("file", compile_file)->required();
    compile->add_option("--dump-passes", dump_passes_dir, "write NN_<pass>.mp4l files here");
    compile->add_option("--bug", compile_bugs, "activate a seeded bug (repeatable)");

    // -------------------------------------------------------- generate ----
    auto* generate = app.add_subcommand("generate", "generate random well-typed programs");
    uint64_t gen_seed = 0;
    int gen_count = 1;
    std::string gen_out_dir = ".";
    std::string gen_config;
    generate->add_option("--seed", gen_seed);
    generate->add_option("--count", gen_count);
    generate->add_option("--out-dir", gen_out_dir);
    generate->add_option("--config", gen_config, "flat key=value generator config file");

    // -------------------------------------------------------- validate ----
    auto* validate = app.add_subcommand("validate", "translation validation of the pipeline");
    std::string validate_file, validate_backend = "brute", validate_taint = "aware";
    std::string dump_smt_dir;
    std::vector<std::string> validate_bugs;
    int validate_budget = 20;
    validate->add_option("file", validate_file)->required();
    validate->add_option("--bug", validate_bugs, "activate a seeded bug (repeatable)");
    validate->add_option("--backend", validate_backend)->check(CLI::IsMember({"brute", "smt"}));
    validate->add_option("--taint-mode", validate_taint)->check(CLI::IsMember({"strict", "aware"}));
    validate->add_option("--budget", validate_budget, "brute-force width budget in bits");
    validate->add_option("--dump-smt", dump_smt_dir, "write one SMT-LIB2 script per check");

    // ------------------------------------------------------------- mbt ----
    auto* mbt_cmd = app.add_subcommand("mbt", "model-based end-to-end testing");
    std::string mbt_file, mbt_policy = "zero", stf_out_dir;
    std::vector<std::string> mbt_bugs;
    int mbt_limit = 32;
    uint64_t mbt_seed = 1;
    mbt_cmd->add_option("file", mbt_file)->required();
    mbt_cmd->add_option("--bug", mbt_bugs, "activate a seeded bug (repeatable)");
    mbt_cmd->add_option("--undefined-policy", mbt_policy, "zero | pattern:<hex byte>");
    mbt_cmd->add_option("--limit", mbt_limit, "path enumeration limit");
    mbt_cmd->add_option("--seed", mbt_seed);
    mbt_cmd->add_option("--stf-out", stf_out_dir, "write <control>.stf test files here");

    // -------------------------------------------------------- campaign ----
    auto* camp = app.add_subcommand("campaign", "generate/validate/mbt loop");
    uint64_t camp_seed = 42;
    int camp_count = 100, camp_jobs = 0;
    std::vector<std::string> camp_bugs;
    std::string camp_findings, camp_report, camp_config, camp_backend = "brute";
    bool camp_no_mbt = false;
    bool camp_all_bugs = false;
    camp->add_option("--seed", camp_seed, "master seed");
    camp->add_option("--count", camp_count);
    camp->add_option("--jobs", camp_jobs, "worker threads (default: CPUs)");
    camp->add_option("--bug", camp_bugs, "activate a seeded bug (repeatable)");
    camp->add_flag("--all-bugs", camp_all_bugs, "activate every catalog bug");
    camp->add_option("--findings", camp_findings, "JSONL findings file (default stdout)");
    camp->add_option("--report", camp_report, "summary report JSON file");
    camp->add_option("--config", camp_config, "generator config file");
    camp->add_option("--backend", camp_backend)->check(CLI::IsMember({"brute", "smt"}));
    camp->add_flag("--no-mbt", camp_no_mbt, "skip the model-based-testing phase");

    // ------------------------------------------------------- smt-solve ----
    auto* solve = app.add_subcommand("smt-solve",
                                     "QF_BV mini-solver over stdin/stdout (SMT-LIB2 subset)");
    int solve_max_bits = 26;
    solve->add_option("--max-bits", solve_max_bits, "answer unknown beyond this many bits");

    // ---------------------------------------------------------- bugs ------
    auto* bugs_cmd = app.add_subcommand("bugs", "list the seeded-bug catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed()) {
            int rc = 0;
            auto tp = load_program(check_file, rc);
            if (!tp) return rc;
            if (dump_semantics) {
                for (const auto& control : tp->program.pipeline()) {
                    minip4::sem::BlockSemantics s = minip4::sem::interpret_block(*tp, control);
                    std::cout << "control " << control << ":\n" << s.render() << "\n";
                    if (dump_smt_text) {
                        minip4::equiv::Comparison cmp(s, s, minip4::equiv::Mode::Strict);
                        std::cout << minip4::equiv::emit_smt(cmp) << "\n";
                    }
                }
            } else {
                std::cout << check_file << ": ok\n";
            }
            return 0;
        }

        if (compile->parsed()) {
            int rc = 0;
            auto tp = load_program(compile_file, rc);
            if (!tp) return rc;
            minip4::passes::PipelineConfig cfg;
            cfg.bugs = parse_bugs(compile_bugs, rc);
            if (rc) return rc;
            minip4::passes::PassTrace trace =
                minip4::passes::run_pipeline(std::move(*tp), cfg);
            for (size_t i = 0; i < trace.elements.size(); ++i) {
                const auto& el = trace.elements[i];
                std::cout << i << ": " << el.pass_name << " (hash " << std::hex << el.hash
                          << std::dec << ")\n";
                if (!dump_passes_dir.empty()) {
                    std::filesystem::create_directories(dump_passes_dir);
                    char name[64];
                    snprintf(name, sizeof name, "%02zu_%s.mp4l", i, el.pass_name.c_str());
                    write_file(dump_passes_dir + "/" + name, el.text);
                }
            }
            if (trace.crash) {
                std::cout << "crash in " << trace.crash->pass << ": " << trace.crash->message
                          << "\n";
                return kExitFindings;
            }
            if (trace.reparse_failure) {
                std::cout << "invalid emit in " << trace.reparse_failure->pass << ": "
                          << trace.reparse_failure->detail << "\n";
                return kExitFindings;
            }
            return 0;
        }

        if (generate->parsed()) {
            minip4::gen::GenConfig cfg;
            if (!gen_config.empty()) {
                minip4::Diagnostics diags;
                cfg = minip4::gen::GenConfig::from_text(read_file(gen_config), diags);
                if (minip4::has_error(diags)) {
                    for (const auto& d : diags) std::cerr << d.render(gen_config) << "\n";
                    return kExitUsage;
                }
            }
            std::filesystem::create_directories(gen_out_dir);
            for (int i = 0; i < gen_count; ++i) {
                cfg.seed = gen_seed + static_cast<uint64_t>(i);
                minip4::TypedProgram tp = minip4::gen::generate_program(cfg);
                std::string path =
                    gen_out_dir + "/gen_" + std::to_string(cfg.seed) + ".mp4l";
                write_file(path, minip4::print_program(tp.program));
                std::cout << path << "\n";
            }
            return 0;
        }

        if (validate->parsed()) {
            int rc = 0;
            auto tp = load_program(validate_file, rc);
            if (!tp) return rc;
            minip4::passes::PipelineConfig pipeline;
            pipeline.bugs = parse_bugs(validate_bugs, rc);
            if (rc) return rc;
            minip4::equiv::CheckOptions opts;
            opts.backend = validate_backend == "smt" ? minip4::equiv::Backend::ExternalSolver
                                                     : minip4::equiv::Backend::BruteForce;
            opts.mode = validate_taint == "strict" ? minip4::equiv::Mode::Strict
                                                   : minip4::equiv::Mode::TaintAware;
            opts.width_budget = validate_budget;
            minip4::passes::PassTrace trace =
                minip4::passes::run_pipeline(std::move(*tp), pipeline);
            if (!dump_smt_dir.empty()) {
                std::filesystem::create_directories(dump_smt_dir);
                for (size_t i = 0; i + 1 < trace.elements.size(); ++i) {
                    for (const auto& control : trace.elements[i].typed.program.pipeline()) {
                        auto arena = std::make_shared<minip4::sem::TermArena>();
                        auto sb = minip4::equiv::interpret_block_in(
                            *arena, trace.elements[i].typed, control);
                        sb.arena = arena;
                        auto sa = minip4::equiv::interpret_block_in(
                            *arena, trace.elements[i + 1].typed, control);
                        sa.arena = arena;
                        minip4::equiv::Comparison cmp(sb, sa, opts.mode);
                        char name[128];
                        snprintf(name, sizeof name, "%02zu_%s_%s.smt2", i,
                                 trace.elements[i + 1].pass_name.c_str(), control.c_str());
                        write_file(dump_smt_dir + "/" + name, minip4::equiv::emit_smt(cmp));
                    }
                }
            }
            auto findings = minip4::equiv::validate_trace(trace, opts);
            for (const auto& f : findings) print_finding(f);
            if (findings.empty()) std::cout << "clean: all pass pairs equivalent\n";
            return findings_exit_code(findings);
        }

        if (mbt_cmd->parsed()) {
            int rc = 0;
            auto tp = load_program(mbt_file, rc);
            if (!tp) return rc;
            minip4::mbt::MbtConfig cfg;
            cfg.pipeline.bugs = parse_bugs(mbt_bugs, rc);
            if (rc) return rc;
            cfg.path_limit = mbt_limit;
            cfg.seed = mbt_seed;
            if (mbt_policy == "zero") {
                cfg.policy = minip4::sem::TaintPolicy::zero();
            } else if (mbt_policy.rfind("pattern:", 0) == 0) {
                cfg.policy = minip4::sem::TaintPolicy::pattern(
                    static_cast<uint8_t>(std::stoul(mbt_policy.substr(8), nullptr, 16)));
            } else {
                std::cerr << "bad --undefined-policy\n";
                return kExitUsage;
            }
            if (!stf_out_dir.empty()) {
                std::filesystem::create_directories(stf_out_dir);
                for (const auto& control : tp->program.pipeline()) {
                    auto model = minip4::sem::interpret_block(*tp, control);
                    auto paths = minip4::mbt::enumerate_paths(model, cfg.path_limit);
                    auto derived = minip4::mbt::derive_testcases(model, paths, cfg.seed);
                    write_file(stf_out_dir + "/" + control + ".stf",
                               minip4::mbt::emit_stf(model, derived.cases));
                }
            }
            auto findings = minip4::mbt::run_mbt(*tp, cfg);
            for (const auto& f : findings) print_finding(f);
            if (findings.empty()) std::cout << "clean: all test cases pass\n";
            return findings_exit_code(findings);
        }

        if (camp->parsed()) {
            int rc = 0;
            minip4::campaign::CampaignConfig cfg;
            if (!camp_config.empty()) {
                minip4::Diagnostics diags;
                cfg.gen = minip4::gen::GenConfig::from_text(read_file(camp_config), diags);
                if (minip4::has_error(diags)) {
                    for (const auto& d : diags) std::cerr << d.render(camp_config) << "\n";
                    return kExitUsage;
                }
            }
            cfg.gen.seed = camp_seed;
            cfg.count = camp_count;
            cfg.jobs = camp_jobs;
            cfg.with_mbt = !camp_no_mbt;
            cfg.check.backend = camp_backend == "smt" ? minip4::equiv::Backend::ExternalSolver
                                                      : minip4::equiv::Backend::BruteForce;
            if (camp_all_bugs) {
                for (const auto& b : minip4::passes::bug_catalog()) cfg.bugs.insert(b.id);
            } else {
                cfg.bugs = parse_bugs(camp_bugs, rc);
                if (rc) return rc;
            }
            std::ofstream findings_file;
            std::ostream* jsonl = &std::cout;
            if (!camp_findings.empty()) {
                findings_file.open(camp_findings, std::ios::binary);
                if (!findings_file) {
                    std::cerr << "cannot write " << camp_findings << "\n";
                    return kExitUsage;
                }
                jsonl = &findings_file;
            }
            minip4::campaign::CampaignReport report =
                minip4::campaign::run_campaign(cfg, jsonl);
            std::string summary = minip4::campaign::report_to_json(report);
            if (!camp_report.empty()) {
                write_file(camp_report, summary + "\n");
            } else {
                std::cerr << summary << "\n";
            }
            return 0;
        }

        if (solve->parsed()) {
            return minip4::smt::solve_stream(std::cin, std::cout, solve_max_bits);
        }

        if (bugs_cmd->parsed()) {
            for (const auto& b : minip4::passes::bug_catalog()) {
                std::cout << b.id << "  (" << minip4::passes::to_string(b.pass) << ")\n"
                          << "    trigger: " << b.trigger << "\n"
                          << "    effect:  " << b.effect << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}

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

#include "minip4/campaign.h"

#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "minip4/printer.h"

namespace minip4::campaign {

using nlohmann::json;

ProgramResult run_one_program(uint64_t seed, const CampaignConfig& cfg) {
    ProgramResult result;
    result.seed = seed;
    gen::GenConfig gc = cfg.gen;
    gc.seed = seed;

    TypedProgram program;
    try {
        program = gen::generate_program(gc);
    } catch (const gen::GenerationBudgetExhausted& e) {
        result.error = e.what();
        return result;
    }

    passes::PipelineConfig pipeline;
    pipeline.bugs = cfg.bugs;
    passes::PassTrace trace = passes::run_pipeline(std::move(program), pipeline);

    std::string name = "gen_" + std::to_string(seed);
    result.findings = equiv::validate_trace(trace, cfg.check);
    if (cfg.with_mbt) {
        mbt::MbtConfig mc;
        mc.pipeline = pipeline;
        mc.policy = cfg.policy;
        mc.path_limit = cfg.mbt_path_limit;
        mc.seed = seed;
        // the trace already carries crash/reparse findings via validate_trace;
        // only genuine end-to-end results are added here
        if (!trace.crash && !trace.reparse_failure) {
            auto mbt_findings = mbt::run_mbt_on_trace(trace, mc);
            result.findings.insert(result.findings.end(),
                                   std::make_move_iterator(mbt_findings.begin()),
                                   std::make_move_iterator(mbt_findings.end()));
        }
    }
    for (auto& f : result.findings) {
        f.program = name;
        f.seed = seed;
    }
    return result;
}

std::string finding_to_json(const equiv::Finding& f, bool deterministic) {
    json j;
    j["kind"] = equiv::to_string(f.kind);
    j["program"] = f.program;
    j["pass"] = f.pass;
    j["control"] = f.control;
    j["detail"] = f.detail;
    j["seed"] = f.seed;
    j["backend"] = f.backend;
    j["ms"] = deterministic ? 0.0 : f.ms;
    if (f.cex) {
        json cex;
        cex["inputs"] = f.cex->inputs;
        json before = json::object();
        for (const auto& [k, v] : f.cex->before_out) before[k] = v;
        json after = json::object();
        for (const auto& [k, v] : f.cex->after_out) after[k] = v;
        cex["before_out"] = before;
        cex["after_out"] = after;
        j["counterexample"] = cex;
    }
    return j.dump();
}

std::string report_to_json(const CampaignReport& r) {
    json j;
    j["master_seed"] = r.master_seed;
    j["count"] = r.count;
    j["totals"] = r.totals;
    j["programs_with_findings"] = r.programs_with_findings;
    j["generation_failures"] = r.generation_failures;
    j["wall_ms"] = r.wall_ms;
    json rows = json::array();
    for (const auto& row : r.detection) {
        json jr;
        jr["bug_id"] = row.bug_id;
        jr["programs_tried"] = row.programs_tried;
        jr["programs_detecting"] = row.programs_detecting;
        jr["first_detection_index"] = row.first_detection_index;
        jr["pinpointed"] = row.pinpointed;
        jr["mispinned"] = row.mispinned;
        rows.push_back(jr);
    }
    j["detection"] = rows;
    return j.dump(2);
}

CampaignReport run_campaign(const CampaignConfig& cfg, std::ostream* jsonl) {
    auto start = std::chrono::steady_clock::now();
    CampaignReport report;
    report.master_seed = cfg.gen.seed;
    report.count = cfg.count;

    std::vector<ProgramResult> results(cfg.count);
    std::vector<uint8_t> done(cfg.count, 0);
    std::atomic<int> next{0};
    std::mutex flush_mutex;
    int flushed = 0;

    auto flush_ready = [&]() {
        if (!jsonl) return;
        while (flushed < cfg.count && done[flushed]) {
            for (const auto& f : results[flushed].findings)
                *jsonl << finding_to_json(f, /*deterministic=*/true) << "\n";
            ++flushed;
        }
        jsonl->flush();
    };

    int jobs = cfg.jobs > 0 ? cfg.jobs
                            : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<int>(jobs, std::max(1, cfg.count));
    auto worker = [&]() {
        while (true) {
            int idx = next.fetch_add(1);
            if (idx >= cfg.count) return;
            uint64_t seed = cfg.gen.seed + static_cast<uint64_t>(idx);
            ProgramResult r = run_one_program(seed, cfg);
            {
                std::lock_guard<std::mutex> lock(flush_mutex);
                results[idx] = std::move(r);
                done[idx] = 1;
                flush_ready();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    {
        std::lock_guard<std::mutex> lock(flush_mutex);
        flush_ready();
    }

    // Detection table: a validate finding is attributed to the toggled bug
    // owning the pass it names; findings naming a pass no toggle owns count
    // as mis-pinpointed.
    std::map<std::string, BugDetectionRow> rows;
    std::map<std::string, std::string> pass_to_bug;
    for (const auto& bug_id : cfg.bugs) {
        BugDetectionRow row;
        row.bug_id = bug_id;
        rows[bug_id] = row;
        if (const passes::BugInfo* info = passes::find_bug(bug_id))
            pass_to_bug[passes::to_string(info->pass)] = bug_id;
    }
    for (int i = 0; i < cfg.count; ++i) {
        const ProgramResult& r = results[i];
        if (!r.error.empty()) ++report.generation_failures;
        if (!r.findings.empty()) ++report.programs_with_findings;
        std::set<std::string> detected_here;
        for (const auto& f : r.findings) {
            ++report.totals[equiv::to_string(f.kind)];
            if (f.pass == "(end-to-end)" || cfg.bugs.empty()) continue;
            auto owner = pass_to_bug.find(f.pass);
            if (owner != pass_to_bug.end()) {
                ++rows[owner->second].pinpointed;
                detected_here.insert(owner->second);
            } else {
                for (auto& [id, row] : rows) ++row.mispinned;
            }
        }
        for (const auto& bug_id : detected_here) {
            auto& row = rows[bug_id];
            ++row.programs_detecting;
            if (row.first_detection_index < 0) row.first_detection_index = i;
        }
        for (auto& [id, row] : rows) ++row.programs_tried;
    }
    for (auto& [id, row] : rows) report.detection.push_back(row);

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

}  // namespace minip4::campaign

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

#ifndef MINIP4_CAMPAIGN_H_
#define MINIP4_CAMPAIGN_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "minip4/equiv.h"
#include "minip4/generator.h"
#include "minip4/mbt.h"

// The fuzzing loop: generate -> pipeline -> translation validation -> MBT,
// over many seeds, with a per-bug detection table. Deterministic given the
// master seed: per-program seeds derive from the job index, findings stream
// ordered by job index regardless of worker scheduling.

namespace minip4::campaign {

struct CampaignConfig {
    gen::GenConfig gen;      // master seed lives here
    int count = 100;
    passes::BugSet bugs;
    equiv::CheckOptions check;
    sem::TaintPolicy policy = sem::TaintPolicy::zero();
    int jobs = 0;            // 0: hardware_concurrency
    int mbt_path_limit = 32;
    bool with_mbt = true;
};

struct BugDetectionRow {
    std::string bug_id;
    int programs_tried = 0;
    int programs_detecting = 0;
    int first_detection_index = -1;
    int pinpointed = 0;   // validate findings naming the toggled pass
    int mispinned = 0;    // validate findings attributable elsewhere
};

struct CampaignReport {
    uint64_t master_seed = 0;
    int count = 0;
    std::map<std::string, int> totals;  // finding kind -> count
    std::vector<BugDetectionRow> detection;
    int programs_with_findings = 0;
    int generation_failures = 0;
    double wall_ms = 0;
};

// Findings for one program (both validation and MBT stages).
struct ProgramResult {
    uint64_t seed = 0;
    std::vector<equiv::Finding> findings;
    std::string error;  // non-finding failure (e.g. generation budget)
};

ProgramResult run_one_program(uint64_t seed, const CampaignConfig& cfg);

// Runs `count` jobs across workers. When `jsonl` is set, findings stream to
// it as JSON lines in job order; timings are zeroed there so identical seeds
// give byte-identical output.
CampaignReport run_campaign(const CampaignConfig& cfg, std::ostream* jsonl);

std::string finding_to_json(const equiv::Finding& f, bool deterministic);
std::string report_to_json(const CampaignReport& r);

}  // namespace minip4::campaign

#endif  // MINIP4_CAMPAIGN_H_

/*
 * Copyright (C) 2026 The dexsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <string>

#include "dexsieve/evaluate.hpp"

namespace dexsieve {

// Rendered sweep artifacts keyed by output-relative path:
//   cells.tsv            every (group, classifier, n) cell, skips included
//   averages.tsv         per-(classifier, n) mean accuracy across groups
//   best.tsv             per-group best cell
//   summary.txt          overall average of per-group maxima
//   table_averages.txt   human-readable averages table
//   table_best.txt       human-readable per-group best table
//   curves/<group>_<classifier>.tsv   accuracy-vs-features plot data
//
// provenance holds preformatted "# ..." lines (tool version, resolved
// configuration) and is embedded at the top of every text artifact.
std::map<std::string, std::string> render_report(const EvaluationReport& report,
                                                 const EvalOptions& opts,
                                                 const std::string& provenance);

std::string render_cells_tsv(const EvaluationReport& report, const std::string& provenance);

// Reads cells.tsv back so tables and curves can be re-rendered without
// re-running the sweep.
EvaluationReport parse_cells_tsv(const std::string& text);

}  // namespace dexsieve

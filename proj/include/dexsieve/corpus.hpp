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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dexsieve/classifier.hpp"
#include "dexsieve/dex_parser.hpp"
#include "dexsieve/histogram.hpp"
#include "dexsieve/permissions.hpp"
#include "dexsieve/smali_parser.hpp"

namespace dexsieve {

struct CorpusEntry {
  std::string app_id;
  std::filesystem::path path;  // resolved against the manifest's directory
  std::optional<Label> label;  // "-" in the manifest means unlabeled
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
  std::filesystem::path base_dir;
};

// Manifest rows: app_id <TAB> label <TAB> path, '#' comments, blank lines
// ignored. Throws DuplicateAppId / IoError.
CorpusManifest load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(const CorpusManifest& manifest);

inline constexpr const char* kManifestHeader =
    "# dexsieve corpus manifest v1\n"
    "# columns: app_id <TAB> label (benign|malicious|-) <TAB> path\n";

struct ExtractionOptions {
  DexOptions dex;
  SmaliOptions smali;
};

// Histogram and permission set of one app payload. Accepted inputs:
//   directory  AndroidManifest.xml (text or AXML) + classes*.dex at the top
//              level + *.smali anywhere below
//   .apk/.zip  AndroidManifest.xml + every classes*.dex entry
//   .dex       bare bytecode, empty permission set
//   .smali     bare disassembly, empty permission set
//   .xml       manifest only, all-zero histogram
// Multi-dex payloads merge bucketwise. A missing manifest yields an empty
// permission set; a malformed one throws.
struct AppPayload {
  OpcodeHistogram histogram;
  PermissionSet permissions;
};

AppPayload extract_app(const std::filesystem::path& path, const ExtractionOptions& opts);

struct AppExtraction {
  std::string app_id;
  std::optional<Label> label;
  bool ok = false;
  bool from_cache = false;
  std::string error;  // quarantine reason when !ok
  OpcodeHistogram histogram;
  PermissionSet permissions;
};

struct IngestResult {
  std::vector<AppExtraction> apps;  // manifest order
  std::size_t extracted = 0;        // parsed this run
  std::size_t cached = 0;           // served from cache
  std::size_t quarantined = 0;
};

// Extracts every manifest entry, caching results under cache_dir keyed by
// the SHA-256 of the app's input bytes plus the extraction options, so
// re-ingesting unchanged inputs touches nothing. Malformed files are
// quarantined with reasons, never fatal.
IngestResult ingest(const CorpusManifest& manifest, const std::filesystem::path& cache_dir,
                    const ExtractionOptions& opts, unsigned workers = 1);

// Content hash of an app payload (file, or directory tree in sorted
// relative-path order) combined with the option fingerprint.
std::string app_cache_key(const std::filesystem::path& path, const ExtractionOptions& opts);

}  // namespace dexsieve

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

#include "dexsieve/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dexsieve/axml_parser.hpp"
#include "dexsieve/digest.hpp"
#include "dexsieve/io_util.hpp"
#include "dexsieve/manifest_xml.hpp"
#include "dexsieve/worker_pool.hpp"
#include "dexsieve/zip_reader.hpp"

namespace dexsieve {

namespace fs = std::filesystem;

namespace {

bool is_classes_dex_name(std::string_view name) {
  if (name.size() < 11 || name.compare(0, 7, "classes") != 0) return false;
  if (name.compare(name.size() - 4, 4, ".dex") != 0) return false;
  std::string_view middle = name.substr(7, name.size() - 11);
  for (char c : middle) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool has_suffix(const fs::path& p, std::string_view suffix) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == suffix;
}

PermissionSet parse_manifest_bytes(const Bytes& bytes) {
  if (looks_like_axml(bytes)) return parse_axml(bytes);
  return parse_manifest_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

AppPayload extract_from_directory(const fs::path& dir, const ExtractionOptions& opts) {
  std::vector<fs::path> smali_files;
  std::vector<fs::path> dex_files;
  std::optional<fs::path> manifest;

  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (has_suffix(p, ".smali")) smali_files.push_back(p);
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (is_classes_dex_name(p.filename().string())) dex_files.push_back(p);
    if (p.filename() == "AndroidManifest.xml") manifest = p;
  }
  std::sort(smali_files.begin(), smali_files.end());
  std::sort(dex_files.begin(), dex_files.end());

  AppPayload payload;
  std::vector<OpcodeHistogram> parts;
  for (const fs::path& p : dex_files) {
    parts.push_back(extract_from_dex(read_file_bytes(p), opts.dex));
  }
  if (!smali_files.empty()) {
    std::vector<SmaliDocument> docs;
    docs.reserve(smali_files.size());
    for (const fs::path& p : smali_files) {
      docs.push_back({fs::relative(p, dir).generic_string(), read_file_text(p)});
    }
    parts.push_back(extract_from_smali(docs, opts.smali));
  }
  payload.histogram = merge_histograms(parts);
  if (manifest) payload.permissions = parse_manifest_bytes(read_file_bytes(*manifest));
  return payload;
}

AppPayload extract_from_apk(const Bytes& bytes, const ExtractionOptions& opts) {
  ZipReader zip(bytes);

  std::vector<const ZipReader::Entry*> dex_entries;
  for (const auto& entry : zip.entries()) {
    if (is_classes_dex_name(entry.name)) dex_entries.push_back(&entry);
  }
  std::sort(dex_entries.begin(), dex_entries.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });

  AppPayload payload;
  std::vector<OpcodeHistogram> parts;
  for (const auto* entry : dex_entries) {
    parts.push_back(extract_from_dex(zip.read(*entry), opts.dex));
  }
  payload.histogram = merge_histograms(parts);

  if (const auto* manifest = zip.find("AndroidManifest.xml")) {
    payload.permissions = parse_manifest_bytes(zip.read(*manifest));
  }
  return payload;
}

std::string options_fingerprint(const ExtractionOptions& opts) {
  std::string tag = "opts:v1:dexverify=";
  tag += opts.dex.verify_checksum ? '1' : '0';
  tag += ":unknown=";
  tag += opts.smali.on_unknown == SmaliOptions::OnUnknown::kFail ? "fail" : "warn";
  return tag;
}

void hash_file(Sha256& h, const fs::path& path, const std::string& rel_name) {
  Bytes bytes = read_file_bytes(path);
  h.update(rel_name);
  h.update(std::string(1, '\0'));
  std::uint64_t size = bytes.size();
  std::uint8_t size_le[8];
  for (int i = 0; i < 8; ++i) size_le[i] = static_cast<std::uint8_t>(size >> (8 * i));
  h.update(ByteView(size_le, 8));
  h.update(bytes);
}

struct CachePaths {
  fs::path hist;
  fs::path perms;
};

CachePaths cache_paths(const fs::path& cache_dir, const std::string& key) {
  fs::path shard = cache_dir / key.substr(0, 2);
  return {shard / (key + ".hist"), shard / (key + ".perms")};
}

std::optional<AppPayload> cache_lookup(const CachePaths& paths) {
  std::error_code ec;
  if (!fs::exists(paths.hist, ec) || !fs::exists(paths.perms, ec)) return std::nullopt;
  AppPayload payload;
  auto [id, hist] = parse_histogram_record(trim(read_file_text(paths.hist)));
  (void)id;
  payload.histogram = hist;
  std::istringstream in(read_file_text(paths.perms));
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) payload.permissions.add(t);
  }
  return payload;
}

void cache_store(const CachePaths& paths, const AppPayload& payload) {
  atomic_write_file(paths.hist, histogram_record("cache", payload.histogram) + "\n");
  std::string perms;
  for (const std::string& p : payload.permissions.permissions) {
    perms += p;
    perms += '\n';
  }
  atomic_write_file(paths.perms, perms);
}

}  // namespace

CorpusManifest load_manifest(const fs::path& path) {
  CorpusManifest manifest;
  manifest.base_dir = path.parent_path();
  std::istringstream in(read_file_text(path));
  std::string line;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t, '\t');
    if (fields.size() != 3) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": manifest rows need app_id <TAB> label <TAB> path");
    }
    CorpusEntry entry;
    entry.app_id = trim(fields[0]);
    if (entry.app_id.empty()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": empty app id");
    }
    if (!seen.insert(entry.app_id).second) {
      throw DuplicateAppId(path.string() + ":" + std::to_string(line_no) + ": duplicate app id '" +
                           entry.app_id + "'");
    }
    std::string label = trim(fields[1]);
    if (label != "-") {
      auto l = label_from_name(label);
      if (!l) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": label must be benign, " +
                      "malicious, or '-', got '" + label + "'");
      }
      entry.label = *l;
    }
    fs::path p = trim(fields[2]);
    entry.path = p.is_absolute() ? p : manifest.base_dir / p;
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::string serialize_manifest(const CorpusManifest& manifest) {
  std::string out = kManifestHeader;
  for (const CorpusEntry& e : manifest.entries) {
    fs::path rel = e.path.lexically_relative(manifest.base_dir);
    if (rel.empty() || rel.native().rfind("..", 0) == 0) rel = e.path;
    out += e.app_id;
    out += '\t';
    out += e.label ? label_name(*e.label) : "-";
    out += '\t';
    out += rel.generic_string();
    out += '\n';
  }
  return out;
}

AppPayload extract_app(const fs::path& path, const ExtractionOptions& opts) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return extract_from_directory(path, opts);
  if (!fs::is_regular_file(path, ec)) throw IoError("no such app payload: " + path.string());

  if (has_suffix(path, ".apk") || has_suffix(path, ".zip")) {
    return extract_from_apk(read_file_bytes(path), opts);
  }
  if (has_suffix(path, ".dex")) {
    AppPayload payload;
    payload.histogram = extract_from_dex(read_file_bytes(path), opts.dex);
    return payload;
  }
  if (has_suffix(path, ".smali")) {
    AppPayload payload;
    std::vector<SmaliDocument> docs{{path.filename().string(), read_file_text(path)}};
    payload.histogram = extract_from_smali(docs, opts.smali);
    return payload;
  }
  if (has_suffix(path, ".xml")) {
    AppPayload payload;
    payload.permissions = parse_manifest_bytes(read_file_bytes(path));
    return payload;
  }

  // Fall back to content sniffing for extensionless payloads.
  Bytes bytes = read_file_bytes(path);
  if (looks_like_dex(bytes)) {
    AppPayload payload;
    payload.histogram = extract_from_dex(bytes, opts.dex);
    return payload;
  }
  if (looks_like_zip(bytes)) return extract_from_apk(bytes, opts);
  throw IoError("unrecognized app payload: " + path.string());
}

std::string app_cache_key(const fs::path& path, const ExtractionOptions& opts) {
  Sha256 h;
  h.update(options_fingerprint(opts));

  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::vector<std::pair<std::string, fs::path>> named;
    named.reserve(files.size());
    for (const fs::path& p : files) {
      named.emplace_back(fs::relative(p, path).generic_string(), p);
    }
    std::sort(named.begin(), named.end());
    for (const auto& [rel, p] : named) hash_file(h, p, rel);
  } else {
    hash_file(h, path, "file");
  }
  auto digest = h.finish();
  return to_hex(ByteView(digest.data(), digest.size()));
}

IngestResult ingest(const CorpusManifest& manifest, const fs::path& cache_dir,
                    const ExtractionOptions& opts, unsigned workers) {
  IngestResult result;
  result.apps.resize(manifest.entries.size());

  parallel_for_indexed(manifest.entries.size(), workers, [&](std::size_t i) {
    const CorpusEntry& entry = manifest.entries[i];
    AppExtraction& out = result.apps[i];
    out.app_id = entry.app_id;
    out.label = entry.label;
    try {
      const std::string key = app_cache_key(entry.path, opts);
      const CachePaths paths = cache_paths(cache_dir, key);
      if (auto hit = cache_lookup(paths)) {
        out.histogram = std::move(hit->histogram);
        out.permissions = std::move(hit->permissions);
        out.ok = true;
        out.from_cache = true;
        return;
      }
      AppPayload payload = extract_app(entry.path, opts);
      cache_store(paths, payload);
      out.histogram = std::move(payload.histogram);
      out.permissions = std::move(payload.permissions);
      out.ok = true;
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  for (const AppExtraction& app : result.apps) {
    if (!app.ok) ++result.quarantined;
    else if (app.from_cache) ++result.cached;
    else ++result.extracted;
  }
  return result;
}

}  // namespace dexsieve

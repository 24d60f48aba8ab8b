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

#include "dexsieve/zip_reader.hpp"

#include <zlib.h>

#include <cstring>

namespace dexsieve {

namespace {

using Cursor = ByteCursor<MalformedZip>;

constexpr std::uint32_t kEocdSignature = 0x06054b50;
constexpr std::uint32_t kCentralSignature = 0x02014b50;
constexpr std::uint32_t kLocalSignature = 0x04034b50;
constexpr std::size_t kEocdMinSize = 22;
constexpr std::size_t kMaxCommentSize = 0xffff;

Bytes inflate_raw(ByteView compressed, std::size_t expected_size) {
  Bytes out(expected_size);
  z_stream strm{};
  if (inflateInit2(&strm, -MAX_WBITS) != Z_OK) throw MalformedZip("inflateInit failed");
  strm.next_in = const_cast<Bytef*>(compressed.data());
  strm.avail_in = static_cast<uInt>(compressed.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&strm, Z_FINISH);
  inflateEnd(&strm);
  if (rc != Z_STREAM_END || strm.total_out != expected_size) {
    throw MalformedZip("deflate stream did not decode to the declared size");
  }
  return out;
}

}  // namespace

bool looks_like_zip(ByteView data) {
  return data.size() >= 4 && data[0] == 'P' && data[1] == 'K' &&
         (data[2] == 0x03 || data[2] == 0x05) && (data[3] == 0x04 || data[3] == 0x06);
}

ZipReader::ZipReader(ByteView data) : data_(data) {
  if (data_.size() < kEocdMinSize) throw MalformedZip("too small to hold an end-of-central-directory");

  // EOCD: scan back over a possible archive comment.
  std::size_t scan_floor =
      data_.size() > kEocdMinSize + kMaxCommentSize ? data_.size() - kEocdMinSize - kMaxCommentSize : 0;
  std::size_t eocd_at = data_.size();  // sentinel
  for (std::size_t pos = data_.size() - kEocdMinSize + 1; pos-- > scan_floor;) {
    if (data_[pos] == 0x50 && data_[pos + 1] == 0x4b && data_[pos + 2] == 0x05 &&
        data_[pos + 3] == 0x06) {
      eocd_at = pos;
      break;
    }
  }
  if (eocd_at == data_.size()) throw MalformedZip("end-of-central-directory signature not found");

  Cursor eocd(data_, eocd_at);
  if (eocd.u32() != kEocdSignature) throw MalformedZip("bad EOCD signature");
  eocd.skip(6);  // disk numbers, entries on this disk
  std::uint16_t total_entries = eocd.u16();
  std::uint32_t cd_size = eocd.u32();
  std::uint32_t cd_offset = eocd.u32();
  if (static_cast<std::uint64_t>(cd_offset) + cd_size > data_.size()) {
    throw MalformedZip("central directory out of bounds");
  }

  Cursor cd(data_, cd_offset);
  entries_.reserve(total_entries);
  for (std::uint16_t i = 0; i < total_entries; ++i) {
    if (cd.u32() != kCentralSignature) throw MalformedZip("bad central directory entry signature");
    cd.skip(4);  // version made by, version needed
    std::uint16_t flags = cd.u16();
    std::uint16_t method = cd.u16();
    cd.skip(8);  // time, date, crc32
    std::uint32_t compressed_size = cd.u32();
    std::uint32_t uncompressed_size = cd.u32();
    std::uint16_t name_len = cd.u16();
    std::uint16_t extra_len = cd.u16();
    std::uint16_t comment_len = cd.u16();
    cd.skip(8);  // disk start, internal attrs, external attrs
    std::uint32_t local_offset = cd.u32();
    ByteView name = cd.bytes(name_len);
    cd.skip(extra_len);
    cd.skip(comment_len);

    if (flags & 0x0001) throw MalformedZip("encrypted entries are not supported");
    Entry e;
    e.name.assign(name.begin(), name.end());
    e.method = method;
    e.compressed_size = compressed_size;
    e.uncompressed_size = uncompressed_size;
    e.local_header_offset = local_offset;
    entries_.push_back(std::move(e));
  }
}

const ZipReader::Entry* ZipReader::find(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Bytes ZipReader::read(const Entry& entry) const {
  Cursor local(data_, entry.local_header_offset);
  if (local.u32() != kLocalSignature) throw MalformedZip("bad local header for " + entry.name);
  local.skip(22);  // version, flags, method, time, date, crc, sizes
  std::uint16_t name_len = local.u16();
  std::uint16_t extra_len = local.u16();
  local.skip(name_len);
  local.skip(extra_len);

  ByteView payload = local.bytes(entry.compressed_size);
  switch (entry.method) {
    case 0:
      if (entry.compressed_size != entry.uncompressed_size) {
        throw MalformedZip("stored entry with mismatched sizes: " + entry.name);
      }
      return Bytes(payload.begin(), payload.end());
    case 8:
      return inflate_raw(payload, entry.uncompressed_size);
    default:
      throw MalformedZip("unsupported compression method " + std::to_string(entry.method) +
                         " for " + entry.name);
  }
}

}  // namespace dexsieve

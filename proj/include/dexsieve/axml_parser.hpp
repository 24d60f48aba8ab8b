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

#include "dexsieve/common.hpp"
#include "dexsieve/permissions.hpp"

namespace dexsieve {

// Extracts the android:name values of uses-permission and
// uses-permission-sdk-23 elements from a binary-XML (AXML) manifest.
// Chunk support is limited to what permission extraction needs: string pool
// (UTF-8 and UTF-16), resource map, start/end namespace, start/end element;
// everything else is skipped by size. Throws MalformedAxml on truncated
// chunks or string indices outside the pool.
PermissionSet parse_axml(ByteView bytes);

// True when the buffer starts with an XML resource chunk header.
bool looks_like_axml(ByteView data);

}  // namespace dexsieve

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

#include <string_view>

#include "dexsieve/permissions.hpp"

namespace dexsieve {

// Same contract as parse_axml, over the plain-text XML encoding. The input
// is expected to be well-formed; the scanner only needs element names and
// attributes, and throws MalformedXml on unterminated constructs.
PermissionSet parse_manifest_text(std::string_view text);

}  // namespace dexsieve

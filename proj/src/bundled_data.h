/* Copyright 2026 The Whatif Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WHATIF_SRC_BUNDLED_DATA_H_
#define WHATIF_SRC_BUNDLED_DATA_H_

#include <string_view>

namespace whatif::internal {

// Contents of data/profiles/<model>.csv, embedded at build time. Empty for
// unknown names.
std::string_view BundledProfileCsv(std::string_view model);

// Contents of data/reference/measured_scaling.csv.
std::string_view BundledReferenceCsv();

}  // namespace whatif::internal

#endif  // WHATIF_SRC_BUNDLED_DATA_H_

/*
 * Copyright (c) 2026, The ballotscope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef BALLOTSCOPE_SRC_ASSETS_HH_
#define BALLOTSCOPE_SRC_ASSETS_HH_

#include <string_view>
#include <vector>

namespace ballotscope::detail {

struct Asset {
  std::string_view name;
  std::string_view text;
};

const std::vector<Asset>& shipped_models();
const std::vector<Asset>& shipped_scenarios();

}  // namespace ballotscope::detail

#endif  // BALLOTSCOPE_SRC_ASSETS_HH_

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

#include "ballotscope/starvote.hh"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "assets.hh"
#include "ballotscope/error.hh"

namespace ballotscope {

namespace {

std::vector<std::string> split(std::string_view list) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss{std::string(list)};
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const detail::Asset* find_asset(const std::vector<detail::Asset>& assets,
                                std::string_view name) {
  for (const auto& a : assets) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

}  // namespace

StarExtensions parse_extensions(std::string_view list) {
  StarExtensions ext;
  for (const auto& e : split(list)) {
    if (e == "counting") {
      ext.counting = true;
    } else if (e == "pins") {
      ext.pins = true;
    } else if (e == "hashchain") {
      ext.hashchain = true;
    } else if (e != "none") {
      throw Error("unknown extension '" + e + "' (known: counting, pins, hashchain)");
    }
  }
  return ext;
}

Model star_template(const StarExtensions& ext) {
  int n = ext.counting + ext.pins + ext.hashchain;
  if (n > 1) throw Error("extensions counting, pins and hashchain are exclusive");
  std::string name = ext.counting ? "star_counting"
                     : ext.pins   ? "star_pins"
                     : ext.hashchain ? "star_hashchain"
                                     : "star_base";
  return parse_model(shipped_model_source(name), name);
}

namespace {

Model instantiate_star(const Model& tmpl, const StarParams& p) {
  InstanceParams ip;
  ip.voters = p.voters;
  ip.candidates = p.candidates;
  if (p.candidates.size() < 2) {
    throw BoundError("at least two distinct candidates are required");
  }
  std::string first = p.first.empty() ? p.candidates[0] : p.first;
  std::string second = p.second.empty() ? p.candidates[1] : p.second;
  for (const auto& c : {first, second}) {
    if (std::find(p.candidates.begin(), p.candidates.end(), c) == p.candidates.end()) {
      throw Error("vote '" + c + "' is not a candidate");
    }
  }
  ip.votes = swap_votes(p.voters, first, second);
  return instantiate(tmpl, ip);
}

}  // namespace

Model build_star_model(const StarParams& p) {
  if (p.ext.hashchain) return build_hashchain_model(p);
  return instantiate_star(star_template(p.ext), p);
}

Model build_hashchain_model(const StarParams& p) {
  if (p.voters != 2) {
    throw BoundError("the hash-chain model needs exactly two voters, got " +
                     std::to_string(p.voters));
  }
  StarExtensions ext;
  ext.hashchain = true;
  return instantiate_star(star_template(ext), p);
}

Scenario corruption_scenario(const std::vector<std::string>& agents) {
  if (agents.empty()) throw Error("corruption needs at least one agent");
  Scenario s = builtin_scenario("dy1");
  s.name = "corrupt";
  for (const auto& a : agents) {
    std::string id;
    if (a == "terminal") {
      id = "T";
    } else if (a == "ballotbox") {
      id = "B";
    } else if (a == "controller") {
      id = "C";
    } else if (a == "board") {
      id = "W";
    } else if (a.size() > 1 && a[0] == 'v' &&
               std::all_of(a.begin() + 1, a.end(), ::isdigit)) {
      id = a;
    } else {
      throw Error("unknown agent '" + a +
                  "' (known: terminal, ballotbox, controller, board, vN)");
    }
    s.corrupt.push_back(id);
    s.name += "-" + a;
  }
  return s;
}

std::vector<std::string> shipped_model_names() {
  std::vector<std::string> out;
  for (const auto& a : detail::shipped_models()) out.emplace_back(a.name);
  return out;
}

std::vector<std::string> shipped_scenario_names() {
  std::vector<std::string> out;
  for (const auto& a : detail::shipped_scenarios()) out.emplace_back(a.name);
  return out;
}

std::string shipped_model_source(std::string_view name) {
  if (auto a = find_asset(detail::shipped_models(), name)) return std::string(a->text);
  throw Error("unknown model '" + std::string(name) + "'");
}

std::string shipped_scenario_source(std::string_view name) {
  if (auto a = find_asset(detail::shipped_scenarios(), name)) {
    return std::string(a->text);
  }
  throw Error("unknown scenario '" + std::string(name) + "'");
}

Model load_model(const std::string& name_or_path) {
  if (find_asset(detail::shipped_models(), name_or_path)) {
    return parse_model(shipped_model_source(name_or_path), name_or_path);
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw Error("unknown model '" + name_or_path + "'");
  }
  return parse_model(read_file(name_or_path),
                     std::filesystem::path(name_or_path).stem().string());
}

Scenario load_scenario(const std::string& name_or_path) {
  std::string lower = name_or_path;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  const auto& builtins = builtin_scenario_names();
  if (std::find(builtins.begin(), builtins.end(), lower) != builtins.end()) {
    return builtin_scenario(lower);
  }
  if (lower.rfind("corrupt:", 0) == 0) {
    return corruption_scenario(split(name_or_path.substr(8)));
  }
  if (find_asset(detail::shipped_scenarios(), name_or_path)) {
    return parse_scenario(shipped_scenario_source(name_or_path));
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw Error("unknown scenario '" + name_or_path + "'");
  }
  return parse_scenario(read_file(name_or_path));
}

}  // namespace ballotscope

// Copyright 2026 The Lexparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexparse/toy_corpus.hpp"

#include <map>
#include <vector>

#include "lexparse/error.hpp"
#include "lexparse/numcore.hpp"

namespace lexparse {

namespace {

using Choices = std::vector<std::string>;

// Placeholder -> alternatives. Alternatives may contain further placeholders.
const std::map<std::string, Choices>& grammar() {
  static const std::map<std::string, Choices> g = {
      {"ROOT",
       {"[IN:GET_INFO_TRAFFIC how is traffic heading to {DEST} ]",
        "[IN:GET_INFO_TRAFFIC how is traffic to {DEST} {DT} ]",
        "[IN:GET_INFO_TRAFFIC is there traffic on {PATH} ]",
        "[IN:GET_INFO_TRAFFIC is there traffic on {PATH} {DT} ]",
        "[IN:GET_INFO_TRAFFIC any accidents on {PATH} heading to {DEST} ]",
        "[IN:GET_INFO_TRAFFIC how bad is traffic {RADIUS} {LOCREF} ]",
        "[IN:GET_DIRECTIONS directions to {DEST} ]",
        "[IN:GET_DIRECTIONS how do i get to {DEST} {METHOD} ]",
        "[IN:GET_DIRECTIONS show me the way to {DEST} avoiding {PATH} ]",
        "[IN:GET_DIRECTIONS navigate to {DEST} from {SOURCE} ]",
        "[IN:GET_ESTIMATED_DURATION how long will it take to get to {DEST} ]",
        "[IN:GET_ESTIMATED_DURATION how long to drive to {DEST} {DT} ]",
        "[IN:GET_ESTIMATED_DURATION how long from {SOURCE} to {DEST} {METHOD} ]",
        "[IN:GET_EVENT any {EVENT} {DT} ]",
        "[IN:GET_EVENT find {EVENT} {RADIUS} {LOCREF} ]",
        "[IN:GET_EVENT what {EVENT} are happening in {LOCREF} {DT} ]",
        "[IN:GET_EVENT are there {EVENT} at {LOCREF} ]"}},
      {"DEST",
       {"[SL:DESTINATION {DESTVAL} ]",
        "[SL:DESTINATION [IN:GET_LOCATION_HOME [SL:TYPE_RELATION {TR} ] 's house ] ]",
        "[SL:DESTINATION [IN:GET_LOCATION_HOME my [SL:TYPE_RELATION {TR} ] 's house ] ]",
        "[SL:DESTINATION [IN:GET_LOCATION_HOME [SL:CONTACT {CONTACT} ] 's place ] ]",
        "[SL:DESTINATION [IN:GET_LOCATION [SL:POINT_ON_MAP {POI} ] ] ]",
        "[SL:DESTINATION [IN:GET_LOCATION [SL:LOCATION {LOC} ] ] ]"}},
      {"LOCREF",
       {"[SL:LOCATION {LOC} ]",
        "[SL:LOCATION {LOC} ]",
        "[SL:LOCATION [IN:GET_LOCATION [SL:POINT_ON_MAP {POI} ] ] ]"}},
      {"PATH", {"[SL:PATH {PATHVAL} ]"}},
      {"DT", {"[SL:DATE_TIME {DTVAL} ]"}},
      {"EVENT", {"[SL:CATEGORY_EVENT {EVENTVAL} ]"}},
      {"RADIUS", {"[SL:SEARCH_RADIUS {RADIUSVAL} ]"}},
      {"METHOD", {"[SL:METHOD_TRAVEL {METHODVAL} ]"}},
      {"SOURCE", {"[SL:SOURCE {SOURCEVAL} ]"}},
      {"TR",
       {"dad", "mom", "brother", "sister", "wife", "husband", "uncle", "aunt", "grandma",
        "grandpa", "son", "daughter", "step mom", "best friend"}},
      {"CONTACT",
       {"john", "sarah", "mike", "emily", "dad", "mom", "lisa", "kevin", "anna smith", "jake"}},
      {"LOC",
       {"the mall", "the museum", "downtown", "the library", "the gym", "the office",
        "central park", "the station", "the stadium", "the beach", "city hall"}},
      {"POI",
       {"times square", "the space needle", "lake tahoe", "mount rainier", "yosemite",
        "golden gate park", "the pier", "union square"}},
      {"DESTVAL",
       {"home", "work", "the airport", "the hospital", "san franciscos bridge", "my hotel",
        "the school"}},
      {"PATHVAL",
       {"bridge", "the highway", "i - 95", "the tunnel", "route 66", "the freeway",
        "main street", "the bay bridge"}},
      {"DTVAL",
       {"today", "tomorrow", "tonight", "this weekend", "right now", "at 5 pm", "on monday",
        "this morning", "next friday"}},
      {"EVENTVAL",
       {"concerts", "festivals", "parties", "games", "comedy shows", "art fairs"}},
      {"RADIUSVAL", {"near", "close to", "around"}},
      {"METHODVAL", {"driving", "walking", "by bus", "by train", "biking"}},
      {"SOURCEVAL", {"home", "work", "the office", "the station"}},
  };
  return g;
}

std::string expand(const std::string& symbol, Rng& rng, int depth) {
  if (depth > 8) throw_error(ErrorCode::kContract, "toy grammar recursion too deep");
  const Choices& choices = grammar().at(symbol);
  const std::string& pick = choices[rng.below(choices.size())];
  std::string out;
  for (std::size_t i = 0; i < pick.size();) {
    if (pick[i] == '{') {
      std::size_t close = pick.find('}', i);
      out += expand(pick.substr(i + 1, close - i - 1), rng, depth + 1);
      i = close + 1;
    } else {
      out += pick[i++];
    }
  }
  return out;
}

}  // namespace

Corpus generate_toy_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  Corpus out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Example ex = parse_top(expand("ROOT", rng, 0));
    validate_tree(ex.tree, ex.utterance.size());
    ex.utterance.raw = serialize_top(ex.tree, ex.utterance);
    out.push_back(std::move(ex));
  }
  return out;
}

std::string toy_catalog_tsv() {
  return "SL:TYPE_RELATION\tbrother in law\n"
         "SL:TYPE_RELATION\troommate\n"
         "SL:TYPE_RELATION\thomie\n"
         "SL:TYPE_RELATION\tstepfather\n"
         "SL:TYPE_RELATION\tboy friend\n"
         "SL:LOCATION\tbeach park\n"
         "SL:LOCATION\tschool building\n"
         "SL:LOCATION\tstreet - 25\n"
         "SL:LOCATION\tbridge\n"
         "SL:LOCATION\trocket company\n"
         "SL:POINT_ON_MAP\tSilicon Valley\n"
         "SL:POINT_ON_MAP\tRed Rock Canyon\n"
         "SL:POINT_ON_MAP\tWhite House\n"
         "SL:POINT_ON_MAP\tAhaggar National Park\n"
         "SL:POINT_ON_MAP\tSingapore\n";
}

}  // namespace lexparse

// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/trace.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scablab/digest.hpp"

namespace scablab {

namespace {

using nlohmann::json;

json action_to_json(const Action& a) {
  if (a.is_continuous()) return json(a.box);
  return json(a.discrete);
}

Action action_from_json(const json& j) {
  if (j.is_array()) return Action::of(j.get<std::vector<double>>());
  return Action::of(j.get<int>());
}

json events_to_json(const StepEvents& e) {
  json j;
  j["tag"] = static_cast<int>(e.tag);
  j["ts"] = e.trigger_started;
  j["tc"] = e.trigger_completed;
  j["cp"] = e.completion;
  j["re"] = e.rewarding_entered;
  j["rx"] = e.rewarding_exited;
  return j;
}

StepEvents events_from_json(const json& j) {
  StepEvents e;
  e.tag = static_cast<FsmTag>(j.at("tag").get<int>());
  e.trigger_started = j.at("ts").get<bool>();
  e.trigger_completed = j.at("tc").get<bool>();
  e.completion = j.at("cp").get<bool>();
  e.rewarding_entered = j.at("re").get<bool>();
  e.rewarding_exited = j.at("rx").get<bool>();
  return e;
}

}  // namespace

const char* fsm_tag_name(FsmTag tag) {
  switch (tag) {
    case FsmTag::kNone: return "none";
    case FsmTag::kWinning: return "winning";
    case FsmTag::kTriggering: return "triggering";
    case FsmTag::kObserving: return "observing";
    case FsmTag::kRewarding: return "rewarding";
    case FsmTag::kPenalizing: return "penalizing";
  }
  return "?";
}

void write_trace_jsonl(const EpisodeTrace& trace, std::ostream& out) {
  json header;
  header["kind"] = "trace_header";
  header["version"] = trace.version;
  header["seed"] = trace.seed;
  header["game"] = trace.game;
  header["config_digest"] = digest_hex(trace.config_digest);
  header["roles"] = trace.roles;
  header["gamma"] = trace.gamma;
  header["verbose"] = trace.verbose;
  out << header.dump() << "\n";

  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const TraceStep& s = trace.steps[t];
    json line;
    line["t"] = t;
    line["digest"] = digest_hex(s.state_digest);
    json obs = json::array();
    for (auto d : s.obs_digests) obs.push_back(digest_hex(d));
    line["obs"] = obs;
    json acts = json::array();
    for (const auto& a : s.actions) acts.push_back(action_to_json(a));
    line["a"] = acts;
    line["r"] = s.rewards;
    line["ev"] = events_to_json(s.events);
    if (trace.verbose && t < trace.frames.size()) {
      line["frames"] = trace.frames[t];
    }
    out << line.dump() << "\n";
  }

  json footer;
  footer["kind"] = "trace_footer";
  footer["terminal_step"] = trace.terminal_step;
  footer["final_digest"] = digest_hex(trace.final_state_digest);
  footer["return_raw"] = trace.return_raw;
  footer["return_discounted"] = trace.return_discounted;
  out << footer.dump() << "\n";
}

std::string trace_to_jsonl(const EpisodeTrace& trace) {
  std::ostringstream oss;
  write_trace_jsonl(trace, oss);
  return oss.str();
}

namespace {
std::uint64_t hex_to_u64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}
}  // namespace

EpisodeTrace read_trace_jsonl(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (!have_header) {
      if (j.value("kind", "") != "trace_header") {
        throw std::invalid_argument("trace: missing header line");
      }
      trace.version = j.at("version").get<int>();
      trace.seed = j.at("seed").get<std::uint64_t>();
      trace.game = j.at("game").get<std::string>();
      trace.config_digest = hex_to_u64(j.at("config_digest").get<std::string>());
      trace.roles = j.at("roles").get<std::vector<std::string>>();
      trace.gamma = j.at("gamma").get<double>();
      trace.verbose = j.at("verbose").get<bool>();
      have_header = true;
      continue;
    }
    if (j.contains("kind") && j["kind"] == "trace_footer") {
      trace.terminal_step = j.at("terminal_step").get<int>();
      trace.final_state_digest =
          hex_to_u64(j.at("final_digest").get<std::string>());
      trace.return_raw = j.at("return_raw").get<std::vector<double>>();
      trace.return_discounted =
          j.at("return_discounted").get<std::vector<double>>();
      break;
    }
    TraceStep s;
    s.state_digest = hex_to_u64(j.at("digest").get<std::string>());
    for (const auto& d : j.at("obs")) {
      s.obs_digests.push_back(hex_to_u64(d.get<std::string>()));
    }
    for (const auto& a : j.at("a")) s.actions.push_back(action_from_json(a));
    s.rewards = j.at("r").get<std::vector<double>>();
    s.events = events_from_json(j.at("ev"));
    trace.steps.push_back(std::move(s));
    if (trace.verbose && j.contains("frames")) {
      trace.frames.push_back(
          j["frames"].get<std::vector<std::vector<double>>>());
    }
  }
  if (!have_header) throw std::invalid_argument("trace: empty stream");
  return trace;
}

EpisodeTrace trace_from_jsonl(const std::string& text) {
  std::istringstream iss(text);
  return read_trace_jsonl(iss);
}

std::uint64_t trace_digest(const EpisodeTrace& trace) {
  // Serialized form covers every field, so hash that.
  const std::string text = trace_to_jsonl(trace);
  return digest_string(text);
}

}  // namespace scablab

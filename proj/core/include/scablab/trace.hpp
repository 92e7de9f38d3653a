// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_TRACE_HPP_
#define SCABLAB_TRACE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scablab/action.hpp"
#include "scablab/policy.hpp"

namespace scablab {

struct TraceStep {
  std::uint64_t state_digest = 0;            // digest of the pre-action state
  std::vector<std::uint64_t> obs_digests;    // per role, same state
  std::vector<Action> actions;               // per role
  std::vector<double> rewards;               // per role
  StepEvents events;
};

// One episode. Steps are indexed 0..terminal_step; the step at t records the
// joint action taken from state s_t. Frames are retained only under verbose.
struct EpisodeTrace {
  int version = 1;
  std::uint64_t seed = 0;
  std::string game;
  std::uint64_t config_digest = 0;
  std::vector<std::string> roles;
  double gamma = 0.99;

  std::vector<TraceStep> steps;
  int terminal_step = -1;
  std::uint64_t final_state_digest = 0;
  std::vector<double> return_raw;         // plain reward sums per role
  std::vector<double> return_discounted;  // gamma-discounted, matches gamma

  bool verbose = false;
  // frames[t][role] = observation frame at state s_t (verbose only).
  std::vector<std::vector<std::vector<double>>> frames;

  int num_steps() const { return static_cast<int>(steps.size()); }
};

// Versioned JSON-lines: header line, one line per step, footer line.
void write_trace_jsonl(const EpisodeTrace& trace, std::ostream& out);
std::string trace_to_jsonl(const EpisodeTrace& trace);
EpisodeTrace read_trace_jsonl(std::istream& in);
EpisodeTrace trace_from_jsonl(const std::string& text);

// Digest over every recorded field; equal digests mean equal traces.
std::uint64_t trace_digest(const EpisodeTrace& trace);

}  // namespace scablab

#endif  // SCABLAB_TRACE_HPP_

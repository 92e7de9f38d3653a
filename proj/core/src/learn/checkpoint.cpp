// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scablab::learn {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_learner(const fs::path& path, const Learner& learner) {
  write_text_file(path, learner.checkpoint_json());
}

std::unique_ptr<Learner> load_learner(const MarkovGame& game,
                                      const fs::path& path) {
  return learner_from_checkpoint(game, read_text_file(path));
}

std::unique_ptr<Policy> load_policy(const MarkovGame& game,
                                    const fs::path& path) {
  return policy_from_checkpoint(game, read_text_file(path));
}

}  // namespace scablab::learn

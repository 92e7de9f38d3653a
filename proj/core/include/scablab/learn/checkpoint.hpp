// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_CHECKPOINT_HPP_
#define SCABLAB_LEARN_CHECKPOINT_HPP_

#include <filesystem>
#include <string>

#include "scablab/learn/learners.hpp"

namespace scablab::learn {

// Atomic text write: temp file in the same directory, then rename. Creates
// parent directories. Readers never observe a half-written checkpoint.
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void save_learner(const std::filesystem::path& path, const Learner& learner);
std::unique_ptr<Learner> load_learner(const MarkovGame& game,
                                      const std::filesystem::path& path);
std::unique_ptr<Policy> load_policy(const MarkovGame& game,
                                    const std::filesystem::path& path);

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_CHECKPOINT_HPP_

// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_DIGEST_HPP_
#define SCABLAB_DIGEST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scablab/rng.hpp"

namespace scablab {

// Canonical 64-bit digest of a double vector (bit pattern of each value).
std::uint64_t digest_doubles(std::span<const double> values);

std::uint64_t digest_string(std::string_view s);

// Hex rendering used for content-addressed directory names.
std::string digest_hex(std::uint64_t digest);

// Base64 (RFC 4648, with padding) for checkpoint parameter blobs.
std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

// Doubles <-> little-endian byte blob, the checkpoint wire format.
std::string doubles_to_base64(std::span<const double> values);
std::vector<double> base64_to_doubles(std::string_view text);

}  // namespace scablab

#endif  // SCABLAB_DIGEST_HPP_

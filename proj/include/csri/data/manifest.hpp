#pragma once

#include <filesystem>

#include "csri/data/types.hpp"

namespace csri::data {

// Line-oriented manifest file:
//   '#'-prefixed header lines carry dataset id, seed, config hash and role
//   counts; each record line is "path<TAB>label-or-blank<TAB>domain<TAB>role".
// UTF-8, '\n' line endings; byte-for-byte deterministic for a given manifest.
void write_manifest(const SplitManifest& m, const std::filesystem::path& file);

// Parses and validates a manifest. Malformed lines and invariant violations
// raise std::runtime_error carrying the 1-based line number.
SplitManifest load_manifest(const std::filesystem::path& file);

}  // namespace csri::data

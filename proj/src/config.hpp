#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "face_shape.hpp"

namespace fuzzyshape {

/// Text of the shipped default configuration, compiled into the library.
std::string_view embedded_default_config();

/// Parses a JSON configuration. Blocks or keys missing from `text` are taken
/// from `fallback` with a logged notice; with no fallback they are errors.
/// Unknown keys are rejected.
///
/// Throws Error(ParseError) for malformed JSON or mistyped values (the
/// message carries the byte offset or JSON path) and ValidationError for
/// parameters that do not form valid systems.
ShapeSystemRegistry parse_config(std::string_view text, std::string_view source,
                                 const ShapeSystemRegistry *fallback = nullptr);

/// Reads and parses `path`, falling back to default_registry() for missing
/// blocks. A missing or unreadable file is a ParseError.
ShapeSystemRegistry load_config(const std::filesystem::path &path);

/// Canonical JSON form; parse_config(serialize_config(r)) == r exactly.
std::string serialize_config(const ShapeSystemRegistry &reg);

/// "sha256:<hex>" of serialize_config(reg).
std::string config_fingerprint(const ShapeSystemRegistry &reg);

}  // namespace fuzzyshape

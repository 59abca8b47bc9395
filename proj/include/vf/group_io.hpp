#pragma once

// Group description files: JSON documents carrying the free-by-finite data,
// generator images, and optional endomorphism blocks.

#include <optional>
#include <string>

#include "vf/group.hpp"

namespace vf::group_io {

struct GroupFile {
    group::VfPresentation presentation;
    std::optional<group::Endomorphism> endomorphism;
    std::optional<group::Endomorphism> endomorphism_inverse;
};

/// Parses a group description document. Throws ParseError with a field path
/// on malformed input. Does not validate the tables; see validate_presentation.
GroupFile parse_group_file(const std::string& text);

GroupFile load_group_file(const std::string& path);

/// Serializes back to the document format (canonical field order).
std::string format_group_file(const GroupFile& g);

} // namespace vf::group_io

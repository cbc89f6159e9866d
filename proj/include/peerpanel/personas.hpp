#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "peerpanel/types.hpp"

namespace peerpanel {

/// The shipped pack: thirteen reviewer personas plus the metareviewer.
const std::vector<PersonaConfig>& shipped_personas();

/// Reviewer personas only (excludes category meta).
std::vector<PersonaConfig> shipped_reviewers();

/// Looks a persona up in `pack`. Throws UnknownPersona.
const PersonaConfig& find_persona(const std::vector<PersonaConfig>& pack,
                                  std::string_view name);

/// Loads a JSON array of PersonaConfig records; names must be unique.
std::vector<PersonaConfig> load_persona_pack(const std::filesystem::path& path);

}  // namespace peerpanel

#pragma once

#include <string_view>

namespace rootgraph::assets {

/// The BST program as originally written, including its stale-root behaviour.
std::string_view bst_faithful();
/// The BST program with root hygiene fixes; the default for the tools.
std::string_view bst_sanitized();
/// The six-operation example script: i 5, i 2, i 7, i 1, i 4, i 8.
std::string_view fig1_ops();

}  // namespace rootgraph::assets

#pragma once

#include "claimeval/backends.h"

namespace claimeval::detail {

// Registers the "table" (precomputed outputs) and "http" (remote model
// server) adapters for every capability.
void register_builtin_adapters(BackendRegistry& registry);

}  // namespace claimeval::detail

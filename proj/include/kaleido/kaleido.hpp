#pragma once

#include "kaleido/cclo.hpp"
#include "kaleido/coloring.hpp"
#include "kaleido/decorated.hpp"
#include "kaleido/exec.hpp"
#include "kaleido/io.hpp"
#include "kaleido/ramsey.hpp"
#include "kaleido/relstruct.hpp"
#include "kaleido/tree.hpp"

namespace kaleido {
inline constexpr const char* kVersion = "0.1.0";
}

#pragma once

#include "ctrlframe/error.hpp"      // IWYU pragma: export
#include "ctrlframe/frames.hpp"     // IWYU pragma: export
#include "ctrlframe/lab.hpp"        // IWYU pragma: export
#include "ctrlframe/lti.hpp"        // IWYU pragma: export
#include "ctrlframe/matrix.hpp"     // IWYU pragma: export
#include "ctrlframe/moq.hpp"        // IWYU pragma: export
#include "ctrlframe/numkernel.hpp"  // IWYU pragma: export

namespace ctrlframe {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace ctrlframe

#pragma once

namespace spdcfc {

/// Selects the plain loop or the OpenMP kernel. Both produce bit-identical
/// results; the serial path is kept as the reference for tests and benchmarks.
enum class Execution { serial, parallel };

}  // namespace spdcfc

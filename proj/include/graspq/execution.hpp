#pragma once

namespace graspq {

// Serial paths are the reference implementations; parallel runs the same
// per-item function under OpenMP. Results are identical by construction
// (pure per-item work, indexed writes), which the tests assert.
enum class Execution { serial, parallel };

}  // namespace graspq

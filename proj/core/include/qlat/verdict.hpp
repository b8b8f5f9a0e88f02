#pragma once

#include <string>

namespace qlat {

/// Three-valued answer.  SEPARABLE is only issued from an explicit
/// decomposition or an exact-dimension PPT test; INCONCLUSIVE is never
/// upgraded.
enum class Verdict { entangled, separable, inconclusive };

std::string to_string(Verdict v);
/// Inverse of to_string; throws Error on an unknown name.
Verdict verdict_from_string(const std::string& s);

}  // namespace qlat

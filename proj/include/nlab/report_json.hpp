#pragma once

#include "nlab/reduce.hpp"

#include <string>

namespace nlab {

/// Full stage-report documents (interpretation header + per-stage records,
/// rationals as "num/den" strings). The CLI wraps these with its
/// invocation fields; the python module returns them as-is.
std::string d2_report_json(const D2Reducer& red);
std::string omega_report_json(const OmegaReducer& red);

} // namespace nlab

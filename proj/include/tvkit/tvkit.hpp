#pragma once

#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/trig_polynomial.hpp>
#include <tvkit/multipoly.hpp>
#include <tvkit/roots.hpp>
#include <tvkit/decomposition.hpp>
#include <tvkit/density_model.hpp>
#include <tvkit/pushforward.hpp>
#include <tvkit/tv.hpp>
#include <tvkit/besov.hpp>
#include <tvkit/bounds.hpp>
#include <tvkit/audit.hpp>
#include <tvkit/report.hpp>

namespace tvkit {
inline constexpr const char* kVersion = "1.0.0";
}

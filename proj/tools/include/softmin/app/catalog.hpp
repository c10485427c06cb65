#pragma once

#include <iosfwd>

#include "softmin/objective.hpp"

namespace softmin::app {

/// Human-readable listing: label, dimension, domain box, critical points and
/// the lowest escape barrier out of every minimum.
void print_catalog(std::ostream& out, const LandscapeCatalog& catalog);

}  // namespace softmin::app

#include "softmin/app/catalog.hpp"

#include <optional>
#include <ostream>

#include <fmt/format.h>

namespace softmin::app {

namespace {

std::string point(const Point& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) out += fmt::format("{}{:.6g}", i ? ", " : "", x[i]);
  return out + ")";
}

}  // namespace

void print_catalog(std::ostream& out, const LandscapeCatalog& catalog) {
  for (const auto& spec : catalog.entries()) {
    out << objective_label(spec) << '\n';
    out << fmt::format("  dimension   {}\n", spec.dimension);
    std::string box;
    for (const auto& iv : spec.domain_box) box += fmt::format("{}[{:.6g}, {:.6g}]", box.empty() ? "" : " x ", iv.lo, iv.hi);
    out << "  domain      " << box << '\n';
    if (spec.strong_convexity_lambda) out << fmt::format("  lambda      {}\n", *spec.strong_convexity_lambda);
    const auto section = [&](const char* name, const std::vector<CriticalPoint>& pts) {
      for (const auto& cp : pts) out << fmt::format("  {:<11} {}  f = {:.6g}\n", name, point(cp.x), cp.value);
    };
    section("minimum", spec.minima);
    section("maximum", spec.maxima);
    section("saddle", spec.saddles);
    for (const auto& m : spec.minima) {
      std::optional<double> lowest;
      for (const auto* list : {&spec.saddles, &spec.maxima}) {
        for (const auto& cp : *list) {
          const double b = barrier_height(spec, m.x, cp.x);
          if (!lowest || b < *lowest) lowest = b;
        }
      }
      if (lowest) out << fmt::format("  escape      {}  barrier {:.6g}\n", point(m.x), *lowest);
    }
  }
}

}  // namespace softmin::app

#include "tbcavi/fit.hpp"

namespace tbcavi {

Diagnostics& Diagnostics::operator+=(const Diagnostics& o) {
  inverted += o.inverted;
  degenerate += o.degenerate;
  clamped += o.clamped;
  empty_community += o.empty_community;
  theta_floor += o.theta_floor;
  rescale_skipped += o.rescale_skipped;
  return *this;
}

bool Diagnostics::any() const {
  return inverted || degenerate || clamped || empty_community || theta_floor || rescale_skipped;
}

std::string Diagnostics::to_string() const {
  std::string out;
  auto add = [&](const char* name, std::size_t v) {
    if (v == 0) return;
    if (!out.empty()) out += '|';
    out += name;
    out += '=';
    out += std::to_string(v);
  };
  add("inverted", inverted);
  add("degenerate", degenerate);
  add("clamped", clamped);
  add("empty_community", empty_community);
  add("theta_floor", theta_floor);
  add("rescale_skipped", rescale_skipped);
  return out;
}

const char* to_string(Variant v) { return v == Variant::bcavi ? "bcavi" : "t_bcavi"; }
const char* to_string(Mode m) { return m == Mode::general ? "general" : "planted"; }

}  // namespace tbcavi

#pragma once

#include <iosfwd>
#include <string>

#include "kexsim/graph.hpp"

namespace kexsim {

// Plain-text snapshot format for a compatibility graph, so instances can be
// replayed and shared:
//
//   <vertex count>
//   <id> <patient blood> <donor blood> <sensitized 0|1> <critical 0|1>   (x count)
//   <donor-side id> <patient-side id>                                    (one per edge)
//
// Blood types are the literals O, A, B, AB.  Blank lines and lines starting
// with '#' are ignored.  Edges run until end of file.
//
// Loading reconstructs a CompatGraph whose records carry the flags (the
// sensitization scalar is not part of the format; the flag is what match
// objectives consume).  Malformed input throws std::runtime_error naming the
// offending line.

CompatGraph load_instance(std::istream& in);
CompatGraph load_instance_file(const std::string& path);

void save_instance(std::ostream& out, const CompatGraph& g);
void save_instance_file(const std::string& path, const CompatGraph& g);

}  // namespace kexsim

#include "kexsim/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kexsim {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw std::runtime_error("instance line " + std::to_string(line_no) + ": " +
                           what);
}

// Next content line (skipping blanks and '#' comments); false at EOF.
bool next_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

bool parse_flag(const std::string& tok, int line_no) {
  if (tok == "0") return false;
  if (tok == "1") return true;
  fail(line_no, "flag must be 0 or 1, got '" + tok + "'");
}

}  // namespace

CompatGraph load_instance(std::istream& in) {
  std::string line;
  int line_no = 0;

  if (!next_line(in, line, line_no))
    throw std::runtime_error("instance: empty input");
  std::size_t count = 0;
  {
    std::istringstream s(line);
    long long c = -1;
    if (!(s >> c) || c < 0) fail(line_no, "expected a vertex count");
    std::string extra;
    if (s >> extra) fail(line_no, "unexpected token after vertex count");
    count = static_cast<std::size_t>(c);
  }

  std::vector<PairRecord> records;
  records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!next_line(in, line, line_no))
      throw std::runtime_error("instance: expected " + std::to_string(count) +
                               " vertex lines, got " + std::to_string(i));
    std::istringstream s(line);
    unsigned long long id;
    std::string patient, donor, sens_tok, crit_tok;
    if (!(s >> id >> patient >> donor >> sens_tok >> crit_tok))
      fail(line_no, "expected: id patient donor sensitized critical");
    std::string extra;
    if (s >> extra) fail(line_no, "unexpected trailing token '" + extra + "'");

    PairRecord r;
    r.id = static_cast<PairId>(id);
    auto pb = blood_from_string(patient);
    auto db = blood_from_string(donor);
    if (!pb) fail(line_no, "unknown blood type '" + patient + "'");
    if (!db) fail(line_no, "unknown blood type '" + donor + "'");
    r.patient_blood = *pb;
    r.donor_blood = *db;
    r.highly_sensitized = parse_flag(sens_tok, line_no);
    r.sensitization = r.highly_sensitized ? 1.0 : 0.0;
    r.critical = parse_flag(crit_tok, line_no);
    records.push_back(r);
  }

  std::vector<std::pair<PairId, PairId>> edges;
  while (next_line(in, line, line_no)) {
    std::istringstream s(line);
    unsigned long long w, v;
    if (!(s >> w >> v)) fail(line_no, "expected: donor-side-id patient-side-id");
    std::string extra;
    if (s >> extra) fail(line_no, "unexpected trailing token '" + extra + "'");
    edges.emplace_back(static_cast<PairId>(w), static_cast<PairId>(v));
  }

  try {
    return graph_from_edges(std::move(records), edges);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
}

CompatGraph load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return load_instance(in);
}

void save_instance(std::ostream& out, const CompatGraph& g) {
  out << g.vertex_count() << "\n";
  for (const auto& r : g.records) {
    out << r.id << ' ' << to_string(r.patient_blood) << ' '
        << to_string(r.donor_blood) << ' ' << (r.highly_sensitized ? 1 : 0)
        << ' ' << (r.critical ? 1 : 0) << "\n";
  }
  for (const auto& [w, v] : g.edge_list()) out << w << ' ' << v << "\n";
}

void save_instance_file(const std::string& path, const CompatGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  save_instance(out, g);
}

}  // namespace kexsim

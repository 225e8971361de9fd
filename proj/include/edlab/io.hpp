#pragma once

// Flat file formats. Instances and profiles: one decimal number per line.
// Transcripts: "x<TAB>y<TAB>{<,=,>}". SI instances: a line "A:", A's ranks,
// a line "B:", B's ranks. Blank lines and lines starting with '#' are skipped.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "edlab/cluster_profile.hpp"
#include "edlab/core.hpp"
#include "edlab/errors.hpp"
#include "edlab/set_intersection.hpp"

namespace edlab::io {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("line " + std::to_string(line) + ": expected a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw UsageError("line " + std::to_string(line) + ": number out of range");
  }
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

inline std::vector<std::uint64_t> read_numbers(std::istream& in) {
  std::vector<std::uint64_t> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(detail::parse_u64(t, no));
  }
  return out;
}

inline void write_numbers(std::ostream& out, const std::vector<std::uint64_t>& v) {
  for (auto x : v) out << x << '\n';
}

inline Instance read_instance(std::istream& in) {
  auto ranks = read_numbers(in);
  if (ranks.empty()) throw UsageError("instance file is empty");
  return Instance::from_ranks(ranks);
}
inline Instance read_instance(const std::string& path) {
  auto in = detail::open_in(path);
  return read_instance(in);
}
inline void write_instance(std::ostream& out, const Instance& inst) { write_numbers(out, inst.ranks()); }
inline void write_instance(const std::string& path, const Instance& inst) {
  auto out = detail::open_out(path);
  write_instance(out, inst);
}

inline ClusterProfile read_profile(std::istream& in) { return ClusterProfile(read_numbers(in)); }
inline ClusterProfile read_profile(const std::string& path) {
  auto in = detail::open_in(path);
  return read_profile(in);
}
inline void write_profile(std::ostream& out, const ClusterProfile& p) {
  write_numbers(out, {p.sizes().begin(), p.sizes().end()});
}
inline void write_profile(const std::string& path, const ClusterProfile& p) {
  auto out = detail::open_out(path);
  write_profile(out, p);
}

inline Transcript read_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (detail::trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string x, y, sym;
    if (!std::getline(fields, x, '\t') || !std::getline(fields, y, '\t') || !std::getline(fields, sym))
      throw UsageError("line " + std::to_string(no) + ": expected x<TAB>y<TAB>answer");
    sym = detail::trim(sym);
    if (sym.size() != 1) throw UsageError("line " + std::to_string(no) + ": bad answer symbol");
    t.push_back({static_cast<Index>(detail::parse_u64(detail::trim(x), no)),
                 static_cast<Index>(detail::parse_u64(detail::trim(y), no)), order_from_symbol(sym[0])});
  }
  return t;
}
inline Transcript read_transcript(const std::string& path) {
  auto in = detail::open_in(path);
  return read_transcript(in);
}
inline void write_transcript(std::ostream& out, const Transcript& t) {
  for (const auto& e : t) out << e.x << '\t' << e.y << '\t' << order_symbol(e.answer) << '\n';
}
inline void write_transcript(const std::string& path, const Transcript& t) {
  auto out = detail::open_out(path);
  write_transcript(out, t);
}

inline SIInstance read_si_instance(std::istream& in) {
  std::vector<std::uint64_t> a, b;
  std::vector<std::uint64_t>* cur = nullptr;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "A:") {
      cur = &a;
    } else if (t == "B:") {
      cur = &b;
    } else {
      if (!cur) throw UsageError("line " + std::to_string(no) + ": value before the 'A:' or 'B:' header");
      cur->push_back(detail::parse_u64(t, no));
    }
  }
  if (a.empty() || b.empty()) throw UsageError("SI instance needs non-empty A and B sections");
  return {Instance::from_ranks(a), Instance::from_ranks(b)};
}
inline SIInstance read_si_instance(const std::string& path) {
  auto in = detail::open_in(path);
  return read_si_instance(in);
}
inline void write_si_instance(std::ostream& out, const SIInstance& s) {
  out << "A:\n";
  write_numbers(out, s.a.ranks());
  out << "B:\n";
  write_numbers(out, s.b.ranks());
}
inline void write_si_instance(const std::string& path, const SIInstance& s) {
  auto out = detail::open_out(path);
  write_si_instance(out, s);
}

}  // namespace edlab::io

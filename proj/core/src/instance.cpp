#include "alphaquota/instance.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "alphaquota/errors.hpp"

namespace alphaquota {

Instance::Instance(int num_candidates, int committee_size, std::vector<CandidateSet> ballots)
    : m_(num_candidates), k_(committee_size), ballots_(std::move(ballots)) {
  if (ballots_.empty()) throw ValidationError("instance needs at least one voter");
  if (m_ < 1) throw ValidationError("instance needs at least one candidate");
  if (m_ > kMaxCandidates)
    throw ValidationError("at most " + std::to_string(kMaxCandidates) + " candidates are supported, got " +
                          std::to_string(m_));
  if (k_ < 1) throw ValidationError("committee size k must be positive");
  if (k_ > m_)
    throw ValidationError("committee size k=" + std::to_string(k_) + " exceeds candidate count m=" +
                          std::to_string(m_));
  const CandidateSet all = CandidateSet::full(m_);
  const int n = num_voters();
  supporters_.assign(static_cast<std::size_t>(m_), VoterMask(n));
  support_size_.assign(static_cast<std::size_t>(m_), 0);
  for (int v = 0; v < n; ++v) {
    CandidateSet b = ballots_[static_cast<std::size_t>(v)];
    if (!b.subset_of(all))
      throw ValidationError("voter " + std::to_string(v) + " approves a candidate outside [0, " +
                            std::to_string(m_) + ")");
    b.for_each([&](int c) {
      supporters_[static_cast<std::size_t>(c)].insert(v);
      ++support_size_[static_cast<std::size_t>(c)];
    });
  }
}

void require_committee(const Instance& inst, Committee w) {
  if (!w.subset_of(inst.all_candidates()))
    throw ValidationError("committee contains a candidate outside [0, " + std::to_string(inst.num_candidates()) +
                          ")");
  if (w.size() != inst.committee_size())
    throw ValidationError("committee has " + std::to_string(w.size()) + " members, expected k=" +
                          std::to_string(inst.committee_size()));
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::JR:
      return "jr";
    case Axiom::EJR:
      return "ejr";
    case Axiom::EJRPlus:
      return "ejrplus";
  }
  return "?";
}

Axiom parse_axiom(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (s == "jr") return Axiom::JR;
  if (s == "ejr") return Axiom::EJR;
  if (s == "ejrplus" || s == "ejr+") return Axiom::EJRPlus;
  throw ParseError("unknown axiom '" + std::string(text) + "' (expected jr, ejr, ejrplus)");
}

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "plain") return Format::Plain;
  throw ParseError("unknown instance format '" + std::string(text) + "' (expected json or plain)");
}

std::string CandidateSet::to_string(int offset) const {
  std::string out;
  for_each([&](int c) {
    if (!out.empty()) out += ',';
    out += std::to_string(c + offset);
  });
  return out;
}

bool lex_less(CandidateSet a, CandidateSet b) {
  if (a == b) return false;
  // The first differing position of the sorted lists is decided by the
  // smallest element of the symmetric difference, unless one list is a
  // prefix of the other.
  int pivot = std::countr_zero(a.bits() ^ b.bits());
  if (a.contains(pivot)) return (b.bits() >> pivot) != 0;
  return (a.bits() >> pivot) == 0;
}

CandidateSet parse_candidate_list(const std::string& text, int m) {
  CandidateSet out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    auto first = token.find_first_not_of(" \t");
    auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty entry in candidate list '" + text + "'");
    token = token.substr(first, last - first + 1);
    if (!std::all_of(token.begin(), token.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw ParseError("invalid candidate index '" + token + "'");
    long c = std::stol(token);
    if (c >= m) throw ValidationError("candidate index " + token + " outside [0, " + std::to_string(m) + ")");
    if (out.contains(static_cast<int>(c))) throw ValidationError("duplicate candidate index " + token);
    out.insert(static_cast<int>(c));
  }
  return out;
}

Rational quota(const Instance& inst, const Rational& alpha, int level) {
  return alpha * Rational(level) * Rational(inst.num_voters(), inst.committee_size());
}

std::int64_t jr_uncovered_bound(const Instance& inst, const Rational& alpha) {
  return quota(inst, alpha, 1).ceil() - 1;
}

}  // namespace alphaquota

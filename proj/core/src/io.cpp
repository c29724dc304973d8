#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alphaquota/errors.hpp"
#include "alphaquota/instance.hpp"

namespace alphaquota {

namespace {

using nlohmann::json;

int json_int_field(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw ParseError(std::string("missing field \"") + field + "\"");
  if (!it->is_number_integer()) throw ParseError(std::string("field \"") + field + "\" must be an integer");
  return it->get<int>();
}

CandidateSet ballot_from_indices(const std::vector<long>& indices, int m, const std::string& where, int line) {
  CandidateSet ballot;
  for (long c : indices) {
    if (c < 0 || c >= m) {
      std::string msg = where + ": candidate index " + std::to_string(c) + " outside [0, " + std::to_string(m) + ")";
      throw ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    }
    if (ballot.contains(static_cast<int>(c))) {
      std::string msg = where + ": duplicate candidate index " + std::to_string(c);
      throw ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    }
    ballot.insert(static_cast<int>(c));
  }
  return ballot;
}

void check_header(int n, int m, int k) {
  if (n < 1) throw ValidationError("n must be positive");
  if (m < 1) throw ValidationError("m must be positive");
  if (m > kMaxCandidates) throw ValidationError("m=" + std::to_string(m) + " exceeds the supported maximum of 64");
  if (k < 1) throw ValidationError("k must be positive");
  if (k > m) throw ValidationError("k=" + std::to_string(k) + " exceeds m=" + std::to_string(m));
}

Instance parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance JSON must be an object");
  const int n = json_int_field(doc, "n");
  const int m = json_int_field(doc, "m");
  const int k = json_int_field(doc, "k");
  check_header(n, m, k);
  auto it = doc.find("approvals");
  if (it == doc.end()) throw ParseError("missing field \"approvals\"");
  if (!it->is_array()) throw ParseError("field \"approvals\" must be an array");
  if (static_cast<int>(it->size()) != n)
    throw ValidationError("\"approvals\" has " + std::to_string(it->size()) + " ballots but n=" + std::to_string(n));
  std::vector<CandidateSet> ballots;
  ballots.reserve(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < it->size(); ++v) {
    const json& row = (*it)[v];
    std::string where = "approvals[" + std::to_string(v) + "]";
    if (!row.is_array()) throw ParseError(where + " must be an array");
    std::vector<long> indices;
    for (const json& entry : row) {
      if (!entry.is_number_integer()) throw ParseError(where + " contains a non-integer entry");
      indices.push_back(entry.get<long>());
    }
    ballots.push_back(ballot_from_indices(indices, m, where, 0));
  }
  return Instance(m, k, std::move(ballots));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::vector<long> parse_int_tokens(const std::string& line, int line_no) {
  std::vector<long> out;
  std::istringstream ss(line);
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(token, &used);
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + token + "'", line_no);
    }
    if (used != token.size()) throw ParseError("expected an integer, got '" + token + "'", line_no);
    out.push_back(value);
  }
  return out;
}

Instance parse_plain(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty input; expected header 'n m k'", 1);
  auto header = parse_int_tokens(lines[0], 1);
  if (header.size() != 3) throw ParseError("header must contain exactly three integers 'n m k'", 1);
  const int n = static_cast<int>(header[0]);
  const int m = static_cast<int>(header[1]);
  const int k = static_cast<int>(header[2]);
  check_header(n, m, k);
  if (static_cast<int>(lines.size()) - 1 < n)
    throw ParseError("expected " + std::to_string(n) + " ballot lines, found " + std::to_string(lines.size() - 1),
                     static_cast<int>(lines.size()) + 1);
  for (std::size_t i = static_cast<std::size_t>(n) + 1; i < lines.size(); ++i)
    if (lines[i].find_first_not_of(" \t") != std::string::npos)
      throw ParseError("unexpected content after " + std::to_string(n) + " ballots", static_cast<int>(i) + 1);
  std::vector<CandidateSet> ballots;
  ballots.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const int line_no = v + 2;
    auto indices = parse_int_tokens(lines[static_cast<std::size_t>(v) + 1], line_no);
    ballots.push_back(ballot_from_indices(indices, m, "voter " + std::to_string(v), line_no));
  }
  return Instance(m, k, std::move(ballots));
}

}  // namespace

Instance parse_instance(std::string_view text, Format format) {
  return format == Format::Json ? parse_json(text) : parse_plain(text);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return parse_instance(buffer.str(), is_json ? Format::Json : Format::Plain);
}

std::string serialize_instance(const Instance& inst, Format format) {
  std::ostringstream out;
  if (format == Format::Json) {
    out << "{\"n\":" << inst.num_voters() << ",\"m\":" << inst.num_candidates() << ",\"k\":" << inst.committee_size()
        << ",\"approvals\":[";
    for (int v = 0; v < inst.num_voters(); ++v) {
      if (v > 0) out << ',';
      out << '[' << inst.ballot(v).to_string() << ']';
    }
    out << "]}\n";
  } else {
    out << inst.num_voters() << ' ' << inst.num_candidates() << ' ' << inst.committee_size() << '\n';
    for (int v = 0; v < inst.num_voters(); ++v) {
      bool first = true;
      inst.ballot(v).for_each([&](int c) {
        if (!first) out << ' ';
        out << c;
        first = false;
      });
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace alphaquota

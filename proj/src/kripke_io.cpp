#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mvpdl/error.hpp"
#include "mvpdl/kripke.hpp"

namespace mvpdl {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_items(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Splits "keyword rest" where rest starts after the first ':'.
bool directive(const std::string& line, std::string_view keyword, std::string& name,
               std::string& rest) {
  if (line.compare(0, keyword.size(), keyword) != 0) return false;
  if (line.size() > keyword.size() && line[keyword.size()] != ' ' && line[keyword.size()] != ':') {
    return false;
  }
  auto colon = line.find(':');
  if (colon == std::string::npos) return false;
  name = trim(std::string_view(line).substr(keyword.size(), colon - keyword.size()));
  rest = line.substr(colon + 1);
  return true;
}

}  // namespace

KripkeModel parse_model(const std::string& text) {
  std::optional<Resolution> resolution;
  std::optional<KripkeModel> model;
  std::set<std::string> seen_rel;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;

  auto need_model = [&]() -> KripkeModel& {
    if (!model) throw FormatError(line_no, "'worlds:' must come before relations and valuations");
    return *model;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::string name;
    std::string rest;
    try {
      if (line[0] == 'n' && line.find('=') != std::string::npos &&
          trim(std::string_view(line).substr(0, line.find('='))) == "n") {
        if (resolution) throw FormatError(line_no, "resolution declared twice");
        std::string digits = trim(std::string_view(line).substr(line.find('=') + 1));
        int steps = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), steps);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
          throw FormatError(line_no, "expected an integer after 'n ='");
        }
        resolution = Resolution(steps);
      } else if (directive(line, "worlds", name, rest) && name.empty()) {
        if (!resolution) throw FormatError(line_no, "'n = <int>' must come first");
        if (model) throw FormatError(line_no, "worlds declared twice");
        model.emplace(*resolution, split_items(rest));
      } else if (directive(line, "rel", name, rest)) {
        KripkeModel& m = need_model();
        if (name.empty()) throw FormatError(line_no, "missing program name");
        if (!seen_rel.insert(name).second) {
          throw FormatError(line_no, "relation '" + name + "' declared twice");
        }
        m.declare_program(name);
        for (const auto& edge : split_items(rest)) {
          auto arrow = edge.find("->");
          if (arrow == std::string::npos) {
            throw FormatError(line_no, "expected u->v, found '" + edge + "'");
          }
          m.add_edge(name, edge.substr(0, arrow), edge.substr(arrow + 2));
        }
      } else if (directive(line, "val", name, rest)) {
        KripkeModel& m = need_model();
        if (name.empty()) throw FormatError(line_no, "missing variable name");
        if (m.valuation().count(name)) {
          throw FormatError(line_no, "valuation of '" + name + "' declared twice");
        }
        std::vector<int> row(m.world_count(), -1);
        for (const auto& item : split_items(rest)) {
          auto eq = item.find('=');
          if (eq == std::string::npos) {
            throw FormatError(line_no, "expected world=i/n, found '" + item + "'");
          }
          std::size_t w = m.world_index(item.substr(0, eq));
          if (row[w] >= 0) throw FormatError(line_no, "world listed twice");
          row[w] = parse_truth_value(item.substr(eq + 1), *resolution).numerator();
        }
        for (std::size_t w = 0; w < row.size(); ++w) {
          if (row[w] < 0) {
            throw FormatError(line_no, "no value for world '" + m.worlds()[w] + "'");
          }
        }
        m.set_valuation(name, std::move(row));
      } else {
        throw FormatError(line_no, "unrecognized line '" + line + "'");
      }
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(line_no, e.what());
    }
  }
  if (!model) throw FormatError(line_no, "missing 'worlds:' line");
  return std::move(*model);
}

KripkeModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string format_model(const KripkeModel& m) {
  std::ostringstream out;
  out << "n = " << m.resolution().steps() << "\n";
  out << "worlds:";
  for (const auto& w : m.worlds()) out << ' ' << w;
  out << "\n";
  for (const auto& [atom, r] : m.relations()) {
    out << "rel " << atom << ":";
    bool first = true;
    for (auto [u, v] : r.pairs()) {
      out << (first ? " " : ", ") << m.worlds()[u] << "->" << m.worlds()[v];
      first = false;
    }
    out << "\n";
  }
  for (const auto& [var, row] : m.valuation()) {
    out << "val " << var << ":";
    for (std::size_t w = 0; w < row.size(); ++w) {
      out << ' ' << m.worlds()[w] << '=' << row[w] << '/' << m.resolution().steps();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mvpdl

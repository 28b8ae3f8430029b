#pragma once

// JSON formats for groups, subgroups and operators, and the two renderings
// of a run report. Points are 1-based in every file format.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomp.hpp"
#include "groups.hpp"
#include "table.hpp"

namespace remak::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_input(where + ": " + e.what());
  }
}

// FNV-1a, printed as 16 hex digits.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline Perm perm_from_json(const json& j, std::size_t degree) {
  if (!j.is_array()) throw invalid_input("a permutation must be a list of cycles");
  std::vector<std::vector<long long>> cycles;
  for (const auto& c : j) {
    if (!c.is_array()) throw invalid_input("a cycle must be a list of points");
    std::vector<long long> cyc;
    for (const auto& x : c) {
      if (!x.is_number_integer()) throw invalid_input("cycle entries must be integers");
      cyc.push_back(x.get<long long>());
    }
    cycles.push_back(std::move(cyc));
  }
  return Perm::from_cycles(degree, cycles);
}

inline json perm_to_json(const Perm& g) {
  json out = json::array();
  for (const auto& c : g.cycles()) {
    json cyc = json::array();
    for (point x : c) cyc.push_back(x + 1);
    out.push_back(std::move(cyc));
  }
  return out;
}

inline json perms_to_json(const std::vector<Perm>& gs) {
  json out = json::array();
  for (const auto& g : gs) out.push_back(perm_to_json(g));
  return out;
}

// A parsed group file. Table input is realized by its right regular action.
struct GroupInput {
  std::string format;
  std::size_t degree = 0;
  std::vector<Perm> generators;
  std::optional<TableGroup> table;
  std::string name;

  PermGroup group() const { return table ? table->group : PermGroup(degree, generators); }
};

inline GroupInput group_from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("group file must be a JSON object");
  GroupInput in;
  in.format = j.value("format", std::string("perm"));
  in.name = j.value("name", std::string());
  if (in.format == "perm") {
    if (!j.contains("degree") || !j["degree"].is_number_integer()) throw invalid_input("perm format needs an integer degree");
    long long d = j["degree"].get<long long>();
    if (d < 1 || d > 1000000) throw invalid_input("degree out of range");
    in.degree = static_cast<std::size_t>(d);
    if (!j.contains("generators") || !j["generators"].is_array()) throw invalid_input("perm format needs a generators list");
    for (const auto& g : j["generators"]) in.generators.push_back(perm_from_json(g, in.degree));
  } else if (in.format == "table") {
    if (!j.contains("table") || !j["table"].is_array()) throw invalid_input("table format needs a table");
    std::vector<std::vector<long long>> raw;
    for (const auto& r : j["table"]) {
      if (!r.is_array()) throw invalid_input("table rows must be lists");
      std::vector<long long> row;
      for (const auto& x : r) {
        if (!x.is_number_integer()) throw invalid_input("table entries must be integers");
        row.push_back(x.get<long long>());
      }
      raw.push_back(std::move(row));
    }
    in.table = group_from_table(raw);
    in.degree = in.table->table.size();
    in.generators = in.table->group.gens();
  } else {
    throw invalid_input("unknown group format '" + in.format + "'");
  }
  return in;
}

inline GroupInput load_group(const std::string& path) { return group_from_json(parse_json(read_file(path), path)); }

inline json group_to_json(const GroupGens& g) {
  return {{"format", "perm"}, {"name", g.name}, {"degree", g.degree}, {"generators", perms_to_json(g.gens)}};
}

inline json table_to_json(const PermGroup& G, const std::string& name = "") {
  // elements in sorted order, 1-based entries
  auto el = G.elements();
  std::sort(el.begin(), el.end());
  std::unordered_map<Perm, std::size_t, perm_hash> at;
  for (std::size_t i = 0; i < el.size(); ++i) at.emplace(el[i], i);
  json t = json::array();
  for (const auto& a : el) {
    json row = json::array();
    for (const auto& b : el) row.push_back(at.at(a * b) + 1);
    t.push_back(std::move(row));
  }
  json out{{"format", "table"}, {"table", std::move(t)}};
  if (!name.empty()) out["name"] = name;
  return out;
}

// Subgroup file: {"generators": [...]} on the group's points. For table
// input, {"elements": [...]} lists table elements instead.
inline std::vector<Perm> subgroup_from_json(const json& j, const GroupInput& in) {
  std::vector<Perm> out;
  if (in.table && j.contains("elements")) {
    for (const auto& x : j["elements"]) {
      long long i = x.get<long long>() - 1;
      if (i < 0 || i >= static_cast<long long>(in.degree)) throw invalid_input("subgroup element out of range");
      out.push_back(in.table->regular(static_cast<point>(i)));
    }
    return out;
  }
  if (!j.contains("generators") || !j["generators"].is_array()) throw invalid_input("subgroup file needs a generators list");
  for (const auto& g : j["generators"]) out.push_back(perm_from_json(g, in.degree));
  return out;
}

// Operator file: {"operators":[{"kind":..., "images":[...]}]}, one image per
// input generator. For table input, "element_images" maps every element
// (1-based list of length n) instead.
inline OperatorSet operators_from_json(const json& j, const GroupInput& in, const PermGroup& G) {
  OperatorSet ops;
  if (!j.is_object() || !j.contains("operators") || !j["operators"].is_array()) throw invalid_input("operator file needs an operators list");
  for (const auto& o : j["operators"]) {
    Operator op;
    std::string kind = o.value("kind", std::string("automorphism"));
    if (kind == "automorphism")
      op.kind = Operator::Kind::automorphism;
    else if (kind == "endomorphism")
      op.kind = Operator::Kind::endomorphism;
    else
      throw invalid_input("unknown operator kind '" + kind + "'");
    if (in.table && o.contains("element_images")) {
      const auto& m = o["element_images"];
      if (!m.is_array() || m.size() != in.degree) throw invalid_input("element_images must list every element");
      for (point a : in.table->gen_index) {
        long long y = m[a].get<long long>() - 1;
        if (y < 0 || y >= static_cast<long long>(in.degree)) throw invalid_input("element image out of range");
        op.images.push_back(in.table->regular(static_cast<point>(y)));
      }
    } else {
      if (!o.contains("images") || !o["images"].is_array()) throw invalid_input("operator needs images");
      for (const auto& g : o["images"]) op.images.push_back(perm_from_json(g, in.degree));
    }
    ops.push_back(std::move(op));
  }
  validate_operators(G, ops);
  return ops;
}

// ---- reports

inline json slps_to_json(const std::vector<Slp>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(s.str());
  return out;
}

inline json factors_json(const std::vector<PermGroup>& factors, bool remak) {
  json out = json::array();
  for (const auto& F : factors)
    out.push_back({{"order", F.order()}, {"generators", perms_to_json(F.gens())}, {"indecomposable", remak}});
  return out;
}

inline json decomposition_json(const Decomposition& d, bool with_certificate, const std::optional<std::string>& failure) {
  json r;
  r["order"] = d.ambient.order();
  r["factors"] = factors_json(d.factors, d.is_remak_claimed);
  r["direct"] = d.is_direct;
  r["remak"] = d.is_remak_claimed;
  r["omega_stable"] = d.omega_stable;
  json c;
  c["status"] = !with_certificate ? std::string("not requested") : failure ? "failed: " + *failure : std::string("verified");
  if (with_certificate) {
    const auto& k = d.certificate;
    c["ambient_order"] = k.ambient_order;
    c["factor_orders"] = k.factor_orders;
    c["generation"] = slps_to_json(k.generation);
    json nw = json::array(), ow = json::array();
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
      json a = json::array(), b = json::array();
      for (const auto& row : k.conj_words[i]) a.push_back(slps_to_json(row));
      for (const auto& row : k.op_words[i]) b.push_back(slps_to_json(row));
      nw.push_back(std::move(a));
      ow.push_back(std::move(b));
    }
    c["normality"] = std::move(nw);
    c["operators"] = std::move(ow);
  }
  r["certificate"] = std::move(c);
  return r;
}

inline std::string perm_text(const json& cycles) {
  if (cycles.empty()) return "()";
  std::string s;
  for (const auto& c : cycles) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i].get<long long>());
    s += ')';
  }
  return s;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Plain rendering of a report. Factor lines carry the same data as the JSON
// and are read back by factors_from_text.
inline std::string render_text(const json& r) {
  std::ostringstream os;
  os << "command: " << r.value("command", std::string()) << "\n";
  if (r.contains("input")) os << "input: " << r["input"].get<std::string>() << "\n";
  if (r.contains("order")) os << "order: " << r["order"].get<std::uint64_t>() << "\n";
  if (r.contains("stage")) os << "stage: " << r["stage"].get<std::string>() << "\n";
  if (r.contains("detail") && !r["detail"].get<std::string>().empty()) os << "detail: " << r["detail"].get<std::string>() << "\n";
  if (r.contains("factors")) {
    os << "factors: " << r["factors"].size() << "\n";
    std::size_t i = 0;
    for (const auto& f : r["factors"]) {
      os << "factor " << ++i << ": order " << f["order"].get<std::uint64_t>() << "; indecomposable "
         << yes_no(f["indecomposable"].get<bool>()) << "; generators";
      for (const auto& g : f["generators"]) os << ' ' << perm_text(g);
      os << "\n";
    }
  }
  if (r.contains("complement")) {
    const auto& c = r["complement"];
    os << "complement: order " << c["order"].get<std::uint64_t>() << "; generators";
    for (const auto& g : c["generators"]) os << ' ' << perm_text(g);
    os << "\n";
  }
  for (const char* key : {"direct", "remak", "omega_stable", "agree"})
    if (r.contains(key)) os << key << ": " << yes_no(r[key].get<bool>()) << "\n";
  for (const char* key : {"basis_orders", "p", "v_exponents", "w_exponents", "rank", "frame_size", "frame", "blocks"})
    if (r.contains(key)) os << key << ": " << r[key].dump() << "\n";
  if (r.contains("oracle_orders")) os << "oracle orders: " << r["oracle_orders"].dump() << "\n";
  if (r.contains("notice")) os << "notice: " << r["notice"].get<std::string>() << "\n";
  if (r.contains("certificate")) {
    const auto& c = r["certificate"];
    os << "certificate: " << c["status"].get<std::string>() << "\n";
    if (c.contains("generation")) {
      std::size_t j = 0;
      for (const auto& w : c["generation"]) os << "  generator " << ++j << " = " << w.get<std::string>() << "\n";
    }
  }
  if (r.contains("timing_ms")) os << "time: " << r["timing_ms"].get<double>() << " ms\n";
  return os.str();
}

inline json cycles_from_text(const std::string& s) {
  json out = json::array();
  if (s == "()") return out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(') throw invalid_input("bad cycle text: " + s);
    auto close = s.find(')', i);
    if (close == std::string::npos) throw invalid_input("bad cycle text: " + s);
    json cyc = json::array();
    std::stringstream in(s.substr(i + 1, close - i - 1));
    std::string tok;
    while (std::getline(in, tok, ',')) cyc.push_back(std::stoll(tok));
    out.push_back(std::move(cyc));
    i = close + 1;
  }
  return out;
}

// The factor list of a text report, in the JSON shape.
inline json factors_from_text(const std::string& text) {
  json out = json::array();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("factor ", 0) != 0) continue;
    std::istringstream ls(line);
    std::string w, ord, ind, yn;
    std::uint64_t order = 0;
    ls >> w >> w >> ord >> order >> w >> ind >> yn >> w;  // factor i: order N; indecomposable yes; generators
    json f{{"order", order}, {"indecomposable", yn == "yes;"}, {"generators", json::array()}};
    std::string g;
    while (ls >> g) f["generators"].push_back(cycles_from_text(g));
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace remak::io

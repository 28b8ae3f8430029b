// remak: direct decompositions of finite groups from the command line.
//
// Exit codes: 0 success, 1 negative answer (no complement, oracle
// disagreement, nondeterminism), 2 resource bound, 3 invalid input,
// 4 internal error.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include <remak/bilinear.hpp>
#include <remak/decomp.hpp>
#include <remak/io.hpp>
#include <remak/oracle/small_group.hpp>

namespace fs = std::filesystem;
using namespace remak;
using io::json;

namespace {

struct Options {
  std::string input, operators, subgroup, dir, csv;
  bool certify = false, as_json = false, as_text = false, seedless = false, timing = false, oracle = false;
  std::uint64_t coset_bound = default_action_bound;
  std::size_t oracle_bound = 5000;
};

// A command produces a report and an exit code.
struct Outcome {
  json report;
  int code = 0;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ElementMap> maps_of(const BoundOperators& b) { return b.maps(); }

Outcome run_decompose_file(const Options& o, const std::string& path, const std::string& ops_path) {
  std::string bytes = io::read_file(path);
  auto in = io::group_from_json(io::parse_json(bytes, path));
  PermGroup G = in.group();
  OperatorSet ops;
  if (!ops_path.empty()) ops = io::operators_from_json(io::parse_json(io::read_file(ops_path), ops_path), in, G);
  auto t0 = std::chrono::steady_clock::now();
  Decomposition d = decompose(G, ops, o.coset_bound);
  std::optional<std::string> failure;
  BoundOperators b(G, ops);
  if (o.certify) failure = verify_certificate(d, maps_of(b));
  double t = ms_since(t0);
  Outcome out;
  out.report = {{"command", "decompose"}, {"input", io::digest(bytes)}};
  out.report.update(io::decomposition_json(d, o.certify, failure));
  if (o.timing) out.report["timing_ms"] = t;
  if (failure || !d.is_direct) out.code = 4;
  return out;
}

Outcome cmd_decompose(const Options& o) { return run_decompose_file(o, o.input, o.operators); }

Outcome cmd_complement(const Options& o) {
  std::string bytes = io::read_file(o.input);
  auto in = io::group_from_json(io::parse_json(bytes, o.input));
  PermGroup G = in.group();
  OperatorSet ops;
  if (!o.operators.empty()) ops = io::operators_from_json(io::parse_json(io::read_file(o.operators), o.operators), in, G);
  PermGroup H(G.degree(), io::subgroup_from_json(io::parse_json(io::read_file(o.subgroup), o.subgroup), in));
  BoundOperators b(G, ops);
  auto r = direct_complement(G, H, maps_of(b), o.coset_bound);
  Outcome out;
  out.report = {{"command", "complement"}, {"input", io::digest(bytes)}, {"order", G.order()},
                {"stage", stage_name(r.stage)}, {"detail", r.detail}};
  if (r.complement)
    out.report["complement"] = {{"order", r.complement->order()}, {"generators", io::perms_to_json(r.complement->gens())}};
  out.code = r.found() ? 0 : 1;
  return out;
}

Outcome cmd_abelian(const Options& o) {
  std::string bytes = io::read_file(o.input);
  auto in = io::group_from_json(io::parse_json(bytes, o.input));
  PermGroup G = in.group();
  if (!G.is_abelian()) throw invalid_input("abelian: the group is not abelian");
  auto pres = primary_decomposition(G);
  auto f = remak_abelian(G, std::vector<ElementMap>{});
  Outcome out;
  out.report = {{"command", "abelian"}, {"input", io::digest(bytes)}, {"order", G.order()},
                {"basis", io::perms_to_json(pres.basis())}, {"basis_orders", pres.orders()}};
  out.report["factors"] = io::factors_json(f, true);
  return out;
}

json mat_json(const Mat& m) {
  json j = json::array();
  for (const auto& r : m) j.push_back(r);
  return j;
}

// {"p":2,"e":1,"n":2,"constants":[[[...]]],"one":[...],"orders":[...]}
Outcome cmd_frame(const Options& o) {
  std::string bytes = io::read_file(o.input);
  json j = io::parse_json(bytes, o.input);
  FiniteCommRing R;
  try {
    auto p = j.at("p").get<i64>();
    int e = j.value("e", 1);
    auto n = j.at("n").get<std::size_t>();
    auto constants = j.at("constants").get<std::vector<Mat>>();
    auto one = j.at("one").get<Vec>();
    auto orders = j.value("orders", std::vector<int>{});
    R = ring_from_structure_constants(p, e, n, constants, one, orders);
  } catch (const json::exception& ex) {
    throw invalid_input(std::string("frame: ") + ex.what());
  }
  auto F = frame(R);
  Outcome out;
  out.report = {{"command", "frame"}, {"input", io::digest(bytes)}, {"frame_size", F.size()}, {"frame", mat_json(F)}};
  return out;
}

Outcome cmd_centroid(const Options& o) {
  std::string bytes = io::read_file(o.input);
  auto in = io::group_from_json(io::parse_json(bytes, o.input));
  PermGroup P = in.group();
  if (P.is_abelian()) throw invalid_input("centroid: the group is abelian, so its commutator map is zero");
  auto bi = bi_of_group(P);
  auto C = centroid(bi.map);
  auto F = frame(C.ring);
  auto blocks = frame_decomposition(bi.map);
  Outcome out;
  json basis = json::array();
  for (const auto& x : C.basis) basis.push_back({{"V", mat_json(x.f)}, {"W", mat_json(x.g)}});
  json bl = json::array();
  for (const auto& b : blocks) bl.push_back({{"v_dim", b.v_rows.size()}, {"w_dim", b.w_rows.size()}});
  out.report = {{"command", "centroid"}, {"input", io::digest(bytes)}, {"order", P.order()}, {"p", bi.map.p},
                {"v_exponents", bi.map.v_exp}, {"w_exponents", bi.map.w_exp}, {"rank", C.basis.size()},
                {"basis", basis}, {"frame_size", F.size()}, {"frame", mat_json(F)}, {"blocks", bl}};
  return out;
}

// Compares factor orders and, up to order 512, isomorphism types.
json oracle_compare(const io::GroupInput& in, const Decomposition& d, std::size_t bound) {
  oracle::SmallGroup S(in.degree, in.generators, bound);
  auto bf = oracle::brute_remak(S);
  std::vector<std::uint64_t> mine, theirs;
  for (const auto& f : d.factors) mine.push_back(f.order());
  for (const auto& f : bf) theirs.push_back(f.order());
  std::sort(mine.begin(), mine.end());
  std::sort(theirs.begin(), theirs.end());
  bool agree = mine == theirs;
  std::string notice;
  if (agree) {
    std::vector<char> used(bf.size(), 0);
    for (const auto& f : d.factors) {
      if (f.order() > 512) continue;
      oracle::SmallGroup A(in.degree, f.gens(), bound);
      bool hit = false;
      for (std::size_t k = 0; k < bf.size() && !hit; ++k) {
        if (used[k] || bf[k].order() != f.order()) continue;
        if (oracle::isomorphic_small(A, oracle::as_group(S, bf[k]))) used[k] = 1, hit = true;
      }
      if (!hit) agree = false, notice = "a factor of order " + std::to_string(f.order()) + " matches no oracle factor";
    }
  } else {
    notice = "factor orders differ";
  }
  json j{{"agree", agree}, {"oracle_orders", theirs}};
  if (!notice.empty()) j["notice"] = notice;
  return j;
}

Outcome cmd_oracle_check(const Options& o) {
  std::string bytes = io::read_file(o.input);
  auto in = io::group_from_json(io::parse_json(bytes, o.input));
  PermGroup G = in.group();
  Decomposition d = find_remak(G, std::vector<ElementMap>{}, o.coset_bound);
  Outcome out;
  out.report = {{"command", "oracle-check"}, {"input", io::digest(bytes)}, {"order", G.order()}};
  out.report["factors"] = io::factors_json(d.factors, d.is_remak_claimed);
  out.report.update(oracle_compare(in, d, o.oracle_bound));
  out.code = out.report["agree"].get<bool>() ? 0 : 1;
  return out;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// One row per *.json file in name order; a failing file only marks its row.
Outcome cmd_batch(const Options& o) {
  if (!fs::is_directory(o.dir)) throw invalid_input("batch: not a directory: " + o.dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << "file,digest,order,factor_orders,generator_counts,certificate,status,oracle\n";
  json rows = json::array();
  std::map<std::string, int> tally;
  Options per = o;
  per.certify = true;
  per.timing = false;
  int code = 0;
  // worst file wins: internal 4, invalid 3, resource 2, oracle disagreement 1
  auto worst = [&code](int c) { code = std::max(code, c); };
  for (const auto& f : files) {
    json row{{"file", f.filename().string()}};
    std::string status = "ok", oracle_col = "-";
    try {
      auto one = run_decompose_file(per, f.string(), "");
      const auto& r = one.report;
      if (one.code != 0) {
        status = "certificate failed";
        worst(one.code);
      }
      row["digest"] = r["input"];
      row["order"] = r["order"];
      std::string orders, gens;
      for (const auto& x : r["factors"]) {
        orders += (orders.empty() ? "" : " ") + std::to_string(x["order"].get<std::uint64_t>());
        gens += (gens.empty() ? "" : " ") + std::to_string(x["generators"].size());
      }
      row["factor_orders"] = orders;
      row["generator_counts"] = gens;
      row["certificate"] = r["certificate"]["status"];
      if (o.oracle) {
        try {
          auto in = io::load_group(f.string());
          Decomposition d = find_remak(in.group(), std::vector<ElementMap>{}, o.coset_bound);
          auto c = oracle_compare(in, d, o.oracle_bound);
          oracle_col = c["agree"].get<bool>() ? "agree" : "DISAGREE";
          if (!c["agree"].get<bool>()) worst(1);
        } catch (const resource_bound&) {
          oracle_col = "skipped";
        }
      }
    } catch (const resource_bound& e) {
      status = std::string("resource: ") + e.what();
      worst(2);
    } catch (const invalid_input& e) {
      status = std::string("invalid: ") + e.what();
      worst(3);
    } catch (const std::exception& e) {
      status = std::string("error: ") + e.what();
      worst(4);
    }
    row["status"] = status;
    row["oracle"] = oracle_col;
    ++tally[status == "ok" ? "ok" : "failed"];
    if (oracle_col != "-") ++tally["oracle " + oracle_col];
    csv << csv_field(row["file"]) << ',' << row.value("digest", std::string()) << ','
        << (row.contains("order") ? std::to_string(row["order"].get<std::uint64_t>()) : std::string()) << ','
        << row.value("factor_orders", std::string()) << ',' << row.value("generator_counts", std::string()) << ','
        << csv_field(row.value("certificate", std::string())) << ',' << csv_field(status) << ',' << oracle_col << "\n";
    rows.push_back(std::move(row));
  }
  Outcome out;
  out.report = {{"command", "batch"}, {"files", files.size()}, {"rows", rows}, {"summary", tally}, {"csv", csv.str()}};
  out.code = code;
  return out;
}

std::string render(const Options& o, const json& r) {
  if (r["command"] == "batch" && !o.as_json) {
    std::string s = r["csv"].get<std::string>();
    std::ostringstream os;
    for (const auto& [k, v] : r["summary"].items()) os << "# " << k << ": " << v.get<int>() << "\n";
    return s + os.str();
  }
  if (o.as_json) {
    json copy = r;
    copy.erase("csv");
    return copy.dump(2) + "\n";
  }
  return io::render_text(r);
}

int guarded(const std::function<Outcome()>& f, const Options& o) {
  try {
    Outcome a = f();
    std::string first = render(o, a.report);
    if (o.seedless) {
      Outcome b = f();
      json ra = a.report, rb = b.report;
      ra.erase("timing_ms");
      rb.erase("timing_ms");
      if (render(o, ra) != render(o, rb) || a.code != b.code) {
        std::cerr << "remak: two runs produced different output\n";
        return 1;
      }
    }
    if (!o.csv.empty() && a.report["command"] == "batch") {
      std::ofstream(o.csv) << a.report["csv"].get<std::string>();
    }
    std::cout << first;
    return a.code;
  } catch (const resource_bound& e) {
    std::cerr << "remak: resource bound: " << e.what() << "\n";
    return 2;
  } catch (const invalid_input& e) {
    std::cerr << "remak: invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "remak: internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct decompositions of finite groups"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s, bool input = true) {
    if (input) s->add_option("-i,--input", o.input, "group JSON file")->required()->check(CLI::ExistingFile);
    auto* j = s->add_flag("--json", o.as_json, "JSON output");
    s->add_flag("--text", o.as_text, "text output (default)")->excludes(j);
    s->add_option("--coset-bound", o.coset_bound, "bound on quotient actions");
    s->add_flag("--seedless", o.seedless, "run twice and require identical output");
  };
  auto* dec = app.add_subcommand("decompose", "Remak decomposition, respecting optional operators");
  common(dec);
  dec->add_option("--operators", o.operators, "operator JSON file")->check(CLI::ExistingFile);
  dec->add_flag("--certify", o.certify, "re-verify and print the certificate");
  dec->add_flag("--timing", o.timing, "report wall time");
  auto* com = app.add_subcommand("complement", "direct complement of a normal subgroup");
  common(com);
  com->add_option("--subgroup", o.subgroup, "subgroup JSON file")->required()->check(CLI::ExistingFile);
  com->add_option("--operators", o.operators, "operator JSON file")->check(CLI::ExistingFile);
  auto* ab = app.add_subcommand("abelian", "primary basis and factors of an abelian group");
  common(ab);
  auto* fr = app.add_subcommand("frame", "frame of a commutative ring given by structure constants");
  common(fr);
  auto* ce = app.add_subcommand("centroid", "centroid and frame of the commutator map of a p-group");
  common(ce);
  auto* oc = app.add_subcommand("oracle-check", "compare against brute-force enumeration");
  common(oc);
  oc->add_option("--oracle-bound", o.oracle_bound, "largest group the oracle enumerates");
  auto* ba = app.add_subcommand("batch", "decompose every .json file in a directory");
  common(ba, false);
  ba->add_option("dir", o.dir, "directory of group files")->required();
  ba->add_flag("--oracle", o.oracle, "cross-check with the oracle where it fits");
  ba->add_option("--oracle-bound", o.oracle_bound, "largest group the oracle enumerates");
  ba->add_option("--csv", o.csv, "also write the CSV summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 3;
  }
  if (*dec) return guarded([&] { return cmd_decompose(o); }, o);
  if (*com) return guarded([&] { return cmd_complement(o); }, o);
  if (*ab) return guarded([&] { return cmd_abelian(o); }, o);
  if (*fr) return guarded([&] { return cmd_frame(o); }, o);
  if (*ce) return guarded([&] { return cmd_centroid(o); }, o);
  if (*oc) return guarded([&] { return cmd_oracle_check(o); }, o);
  return guarded([&] { return cmd_batch(o); }, o);
}

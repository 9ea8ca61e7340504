#include "ccpir/cli.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccpir/auditor.hpp"
#include "ccpir/bounds.hpp"
#include "ccpir/caching.hpp"

namespace ccpir::cli {

using nlohmann::ordered_json;

namespace {

RunConfig from_json(const ordered_json& j, RunConfig base) {
  auto get_str = [&](const char* key, std::string& into) {
    if (j.contains(key)) into = j.at(key).get<std::string>();
  };
  auto get_u64 = [&](const char* key, uint64_t& into) {
    if (j.contains(key)) into = j.at(key).get<uint64_t>();
  };
  get_str("command", base.command);
  get_str("scheme", base.scheme);
  if (j.contains("n")) base.n = j.at("n").get<int>();
  if (j.contains("k")) base.k = j.at("k").get<int>();
  if (j.contains("t")) base.t = j.at("t").get<int>();
  if (j.contains("q")) base.q = j.at("q").get<uint32_t>();
  get_str("mu", base.mu);
  get_u64("symbol_len", base.symbol_len);
  get_u64("budget", base.budget);
  get_u64("seed", base.seed);
  get_u64("sample", base.sample);
  if (j.contains("chunks")) base.chunks = j.at("chunks").get<int>();
  get_str("fault", base.fault);
  get_str("out", base.out);
  get_str("format", base.format);
  get_str("dump_tables", base.dump_tables);
  get_str("dump_transcript", base.dump_transcript);
  return base;
}

auditor::Fault parse_fault(const std::string& name) {
  if (name == "none") return auditor::Fault::none;
  if (name == "corrupt_payload") return auditor::Fault::corrupt_payload;
  if (name == "leak_metadata") return auditor::Fault::leak_metadata;
  throw std::invalid_argument("unknown fault: " + name);
}

auditor::WorldSpec world_spec_of(const RunConfig& c) {
  auditor::WorldSpec spec;
  spec.scheme = c.scheme;
  spec.n = c.n;
  spec.k = c.k;
  spec.t = c.t;
  spec.q = c.q;
  spec.symbol_len = c.symbol_len;
  spec.budget = c.budget;
  spec.chunks = c.chunks;
  spec.fault = parse_fault(c.fault);
  return spec;
}

ordered_json params_json(const RunConfig& c) {
  ordered_json p;
  p["n"] = c.n;
  p["k"] = c.k;
  p["t"] = c.t;
  p["q"] = c.q;
  p["mu"] = c.mu;
  p["symbol_len"] = c.symbol_len;
  p["budget"] = c.budget;
  p["fault"] = c.fault;
  return p;
}

ordered_json verdict_json(const auditor::Verdict& v) {
  ordered_json j;
  j["pass"] = v.pass;
  j["mi_bits"] = v.mi_bits;
  return j;
}

std::string rat(const Rational& r) { return rat_to_string(r); }

void emit(const RunConfig& c, const std::string& text, std::ostream& fallback) {
  if (c.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + c.out);
  f << text;
}

void dump_tables(const RunConfig& c, const auditor::WorldSpec& spec) {
  if (c.dump_tables.empty()) return;
  for (int u = 1; u <= c.k; ++u) {
    std::vector<std::string> vars = {"d", "d" + std::to_string(u)};
    for (int v = 1; v <= c.k; ++v) vars.push_back("M" + std::to_string(v));
    vars.push_back("Z" + std::to_string(u));
    vars.push_back("X");
    auto table = auditor::enumerate_worlds(spec, vars);
    std::ofstream f(c.dump_tables + "/user" + std::to_string(u) + ".csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write table dump to " + c.dump_tables);
    table.write_csv(f);
  }
}

ordered_json subset_json(const SubsetTable& table, size_t rank) {
  ordered_json arr = ordered_json::array();
  for (int u : table.subset(rank)) arr.push_back(u);
  return arr;
}

void dump_transcript(const RunConfig& c, const auditor::WorldSpec& spec) {
  if (c.dump_transcript.empty()) return;
  auto t = auditor::example_transcript(spec);
  SubsetTable subs(t.placement_users, t.t);
  SubsetTable multicast(t.placement_users, t.t + 1);

  ordered_json j;
  j["scheme"] = spec.scheme;
  j["randomness"] = t.randomness;
  j["demands"] = t.demands;
  ordered_json lib;
  lib["q"] = t.library.q;
  lib["files"] = t.library.num_files;
  lib["subfiles_per_file"] = t.library.subfiles;
  lib["symbols_per_subfile"] = t.library.sub_len;
  lib["data"] = t.library.data;
  j["library"] = lib;
  ordered_json caches = ordered_json::array();
  for (const auto& cache : t.caches) {
    ordered_json cj;
    cj["user"] = cache.user;
    ordered_json man = ordered_json::array();
    for (const auto& [ref, v] : cache.man_part) {
      ordered_json e;
      e["file"] = ref.file;
      e["subset"] = subset_json(subs, ref.rank);
      e["symbols"] = v.data();
      man.push_back(e);
    }
    cj["man_part"] = man;
    ordered_json keys = ordered_json::array();
    for (const auto& [rank, v] : cache.key_part) {
      ordered_json e;
      e["subset"] = subset_json(subs, rank);
      e["symbols"] = v.data();
      keys.push_back(e);
    }
    cj["key_part"] = keys;
    cj["metadata"] = cache.metadata;
    caches.push_back(cj);
  }
  j["caches"] = caches;
  ordered_json bc;
  ordered_json payloads = ordered_json::array();
  for (size_t i = 0; i < t.broadcast.payloads.size(); ++i) {
    ordered_json e;
    e["subset"] = subset_json(multicast, t.broadcast.payload_subsets[i]);
    e["symbols"] = t.broadcast.payloads[i].data();
    payloads.push_back(e);
  }
  bc["payloads"] = payloads;
  bc["metadata"] = t.broadcast.metadata;
  j["broadcast"] = bc;

  std::ofstream f(c.dump_transcript, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write transcript to " + c.dump_transcript);
  f << j.dump(2) << "\n";
}

int cmd_audit(const RunConfig& c, std::ostream& out) {
  auto spec = world_spec_of(c);
  auto report = auditor::run_audit(spec);

  ordered_json j;
  j["command"] = "audit";
  j["scheme"] = c.scheme;
  j["params"] = params_json(c);
  j["worlds"] = report.worlds;
  ordered_json checks;
  ordered_json dec;
  dec["pass"] = report.decodability.pass;
  if (!report.decodability.pass) dec["detail"] = report.decode_detail;
  checks["decodability"] = dec;
  ordered_json dp = ordered_json::array();
  for (size_t u = 0; u < report.demand_privacy.size(); ++u) {
    ordered_json e;
    e["user"] = u + 1;
    e["pass"] = report.demand_privacy[u].pass;
    e["mi_bits"] = report.demand_privacy[u].mi_bits;
    dp.push_back(e);
  }
  checks["demand_privacy"] = dp;
  ordered_json cp;
  cp["applicable"] = report.cache_privacy_applicable;
  ordered_json cpu = ordered_json::array();
  for (size_t u = 0; u < report.cache_privacy.size(); ++u) {
    ordered_json e;
    e["user"] = u + 1;
    e["pass"] = report.cache_privacy[u].pass;
    e["mi_bits"] = report.cache_privacy[u].mi_bits;
    cpu.push_back(e);
  }
  cp["users"] = cpu;
  checks["cache_privacy"] = cp;
  ordered_json leak = ordered_json::array();
  for (size_t u = 0; u < report.leakage_epsilon.size(); ++u) {
    ordered_json e;
    e["user"] = u + 1;
    if (std::isnan(report.leakage_epsilon[u])) e["epsilon"] = nullptr;
    else e["epsilon"] = report.leakage_epsilon[u];
    e["exact_zero"] = report.leakage_exact_zero[u];
    leak.push_back(e);
  }
  checks["leakage"] = leak;
  j["checks"] = checks;

  ordered_json load;
  load["memory"] = rat(report.load.memory);
  load["load"] = rat(report.load.load);
  load["constant_payload"] = report.load.constant_payload;
  load["worst_load"] = rat(report.load.worst_load);
  load["cache_entropy_bits"] = report.load.cache_entropy_bits;
  load["metadata_entropy_bits"] = report.load.metadata_entropy_bits;
  j["load"] = load;

  bool gate = report.all_pass();
  if (c.sample > 0) {
    std::string why;
    auto smoke = auditor::smoke_decode(spec, c.sample, c.seed, &why);
    ordered_json s;
    s["samples"] = c.sample;
    s["seed"] = c.seed;
    s["pass"] = smoke.pass;
    if (!smoke.pass) s["detail"] = why;
    j["smoke"] = s;
    gate = gate && smoke.pass;
  }
  j["all_pass"] = gate;

  dump_tables(c, spec);
  dump_transcript(c, spec);
  emit(c, j.dump(2) + "\n", out);
  return gate ? 0 : 1;
}

int cmd_tradeoff(const RunConfig& c, std::ostream& out) {
  Rational mu = rat_from_string(c.mu);
  auto points = caching::tradeoff_points(c.scheme, c.n, c.k, mu);
  if (c.format == "csv") {
    std::ostringstream os;
    bounds::write_tradeoff_csv(os, points, c.scheme);
    emit(c, os.str(), out);
    return 0;
  }
  ordered_json j;
  j["command"] = "tradeoff";
  j["generator"] = c.scheme;
  j["params"] = params_json(c);
  ordered_json arr = ordered_json::array();
  for (const auto& p : points) {
    ordered_json e;
    e["memory"] = rat(p.memory);
    e["load"] = rat(p.load);
    e["subpacketization"] = p.subpacketization.str();
    arr.push_back(e);
  }
  j["points"] = arr;
  emit(c, j.dump(2) + "\n", out);
  return 0;
}

int cmd_pir(const RunConfig& c, std::ostream& out) {
  std::optional<uint32_t> qo;
  if (c.q != 0) qo = c.q;
  auto scheme = pir::parse_scheme(c.scheme, qo);

  ordered_json j;
  j["command"] = "pir";
  j["scheme"] = scheme->id();
  j["messages"] = scheme->num_messages();
  j["field"] = scheme->field_modulus();
  j["download_cost"] = {rat(scheme->download_cost(1)), rat(scheme->download_cost(2))};
  j["total_download_cost"] = rat(scheme->total_download_cost());
  j["subpacketization"] = scheme->subpacketization();

  bool gate = true;

  auto privacy = auditor::check_pir_privacy(*scheme);
  ordered_json pj;
  pj["pass"] = privacy.pass;
  pj["mi_bits"] = {privacy.mi_bits[0], privacy.mi_bits[1]};
  j["privacy"] = pj;
  gate = gate && privacy.pass;

  auto udiq = auditor::check_udiq(*scheme);
  ordered_json uj;
  uj["marginal"] = verdict_json(udiq.marginal);
  uj["per_demand_bits"] = udiq.per_demand_bits;
  j["udiq"] = uj;

  // Correctness sweep and recovery structure are size-guarded; past the
  // budget they are reported as skipped rather than attempted.
  uint64_t lib_space = 1;
  bool lib_fits = true;
  size_t symbols = size_t(scheme->num_messages()) * size_t(scheme->subpacketization());
  for (size_t i = 0; i < symbols && lib_fits; ++i) {
    if (lib_space > c.budget / scheme->field_modulus()) lib_fits = false;
    else lib_space *= scheme->field_modulus();
  }
  uint64_t drd = uint64_t(scheme->num_messages()) * uint64_t(scheme->randomness_count());
  if (lib_fits && lib_space <= c.budget / std::max<uint64_t>(drd, 1)) {
    auto correctness = auditor::verify_pir_correctness(
        *scheme, size_t(scheme->subpacketization()), c.budget);
    ordered_json cj;
    cj["checked"] = true;
    cj["worlds"] = correctness.worlds;
    cj["pass"] = correctness.all_correct;
    if (!correctness.all_correct) cj["detail"] = correctness.first_failure;
    j["correctness"] = cj;
    gate = gate && correctness.all_correct;
  } else {
    j["correctness"] = {{"checked", false}, {"reason", "library space exceeds budget"}};
  }

  size_t pair_work = size_t(scheme->query_count(1)) * size_t(scheme->query_count(2));
  if (symbols <= 64 && pair_work <= 4096) {
    auto rs = bounds::recovery_sets(*scheme);
    ordered_json rj;
    rj["N1"] = rs.n1;
    rj["N2"] = rs.n2;
    rj["uniform"] = rs.uniform;
    if (rs.uniform) {
      rj["n1"] = rs.cond1;
      rj["n2"] = rs.cond2;
      rj["ratio_bound_holds"] = rs.ratio_bound_holds;
    } else {
      rj["violation"] = rs.violation;
    }
    rj["span_recoverable_pairs"] = rs.span_recoverable_pairs;
    j["recovery_sets"] = rj;

    if (rs.uniform) {
      auto lb = bounds::lower_bound(rs, scheme->download_cost(1), scheme->download_cost(2));
      ordered_json bj;
      bj["feasible"] = lb.feasible;
      if (lb.feasible) {
        bj["alpha1"] = lb.alpha1;
        bj["alpha2"] = lb.alpha2;
        bj["min_cost"] = rat(lb.lhs_min);
        bj["holds"] = lb.holds;
        bj["tight"] = lb.tight;
      }
      j["lower_bound"] = bj;
      // The bound constrains query-independent schemes only; a scheme that
      // fails the marginal reading is out of hypothesis, not in violation.
      if (udiq.marginal.pass && lb.feasible) gate = gate && lb.holds;
    }
  } else {
    j["recovery_sets"] = {{"checked", false}, {"reason", "query/message space too large"}};
  }

  j["all_pass"] = gate;
  emit(c, j.dump(2) + "\n", out);
  return gate ? 0 : 1;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  auto rows = bounds::compare_curves(c.n, c.k);
  if (c.format == "json") {
    ordered_json j;
    j["command"] = "compare";
    j["params"] = params_json(c);
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["memory"] = rat(r.memory);
      e["vu_load"] = rat(r.vu_load);
      e["cor1_load"] = rat(r.cor1_load);
      arr.push_back(e);
    }
    j["rows"] = arr;
    emit(c, j.dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream os;
  bounds::write_compare_csv(os, rows);
  emit(c, os.str(), out);
  return 0;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file: " + path);
  ordered_json j;
  f >> j;
  return from_json(j, RunConfig{});
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "audit") return cmd_audit(config, out);
    if (config.command == "tradeoff") return cmd_tradeoff(config, out);
    if (config.command == "pir") return cmd_pir(config, out);
    if (config.command == "compare") return cmd_compare(config, out);
    throw std::invalid_argument("unknown command: " + config.command);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ccpir::cli

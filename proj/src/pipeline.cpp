#include "cppweave/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cppweave {

namespace {

constexpr Stage kOrder[] = {Stage::Solve, Stage::Convert, Stage::Verify, Stage::Report,
                            Stage::ExportDot};

bool reaches(Stage upto, Stage s) {
  if (upto == Stage::All) return true;
  for (Stage x : kOrder) {
    if (x == s) return true;
    if (x == upto) return false;
  }
  return false;
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Solve: return "solve";
    case Stage::Convert: return "convert";
    case Stage::Verify: return "verify";
    case Stage::Report: return "report";
    case Stage::ExportDot: return "export-dot";
    case Stage::All: return "all";
  }
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (Stage x : {Stage::Solve, Stage::Convert, Stage::Verify, Stage::Report,
                  Stage::ExportDot, Stage::All})
    if (to_string(x) == s) return x;
  throw InputError("stage", "unknown stage '" + s + "'");
}

json to_json(const MetricsReport& m) {
  json j = {{"working", m.working},
            {"spp_spare", m.spp_spare},
            {"scap_spp", m.scap_spp},
            {"spp_hash", m.spp_hash}};
  if (m.cpp_protection) j["cpp_protection"] = *m.cpp_protection;
  if (m.cep_savings) j["cep_savings"] = *m.cep_savings;
  if (m.extra_capacity) j["extra_capacity"] = *m.extra_capacity;
  if (m.scap_cpp) j["scap_cpp"] = *m.scap_cpp;
  if (m.census)
    j["groups"] = {{"count", m.census->count},
                   {"sizes", m.census->sizes},
                   {"apsed", m.census->apsed}};
  if (m.verified) {
    j["verification"] = *m.verified ? "PASS" : "FAIL";
    j["unrecovered"] = m.unrecovered;
  }
  return j;
}

std::string render_report(const MetricsReport& m) {
  std::ostringstream out;
  out << "working capacity      " << num(m.working) << "\n";
  out << "SPP spare capacity    " << num(m.spp_spare) << "\n";
  out << "SCaP (SPP)            " << num(m.scap_spp) << "%\n";
  if (m.cpp_protection) {
    out << "CPP protection        " << num(*m.cpp_protection) << "\n";
    out << "CEP savings           " << num(*m.cep_savings) << "\n";
    out << "extra capacity        " << num(*m.extra_capacity) << "\n";
    out << "SCaP (CPP)            " << num(*m.scap_cpp) << "%\n";
  }
  if (m.census) {
    out << "coding groups         " << m.census->count << " (sizes";
    for (auto s : m.census->sizes) out << ' ' << s;
    out << ")\n";
    out << "1+1 APS demands       ";
    if (m.census->apsed.empty()) out << "none";
    for (std::size_t i = 0; i < m.census->apsed.size(); ++i)
      out << (i ? " " : "") << m.census->apsed[i];
    out << "\n";
  }
  if (m.verified)
    out << "verification          " << (*m.verified ? "PASS" : "FAIL") << " ("
        << m.unrecovered << " unrecovered)\n";
  return out.str();
}

std::string render_verification(const VerificationReport& r, bool details) {
  std::ostringstream out;
  out << "link  result  affected  muted\n";
  for (const auto& f : r.failures) {
    std::size_t affected = 0;
    for (const auto& [d, v] : f.verdicts) affected += v.verdict != Verdict::Unaffected;
    out << f.failed << "  " << (f.pass() ? "PASS" : "FAIL") << "  " << affected << "  "
        << f.muted.size() << "\n";
    if (!details) continue;
    for (const auto& [d, v] : f.verdicts) {
      out << "    demand " << d << ": " << to_string(v.verdict);
      if (v.end) out << " at " << side_char(*v.end);
      if (!v.reason.empty()) out << " (" << v.reason << ")";
      out << "\n";
    }
  }
  for (const auto& issue : r.issues) out << "issue: " << issue << "\n";
  out << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

MetricsReport PipelineState::metrics() const {
  MetricsReport m;
  ScapResult s = scap(spp, topology);
  m.working = s.working;
  m.spp_spare = s.spare;
  m.scap_spp = s.percent;
  m.spp_hash = spp_fingerprint(spp);
  if (design) {
    m.cpp_protection = design->protection_capacity;
    m.cep_savings = design->cep_savings;
    m.extra_capacity = extra_capacity(*design);
    m.scap_cpp = scap_percent(design->protection_capacity, s.working);
    GroupCensus c;
    c.count = design->groups.size();
    for (std::size_t i = 0; i < design->groups.size(); ++i) {
      c.sizes.push_back(design->groups[i].members.size());
      c.apsed.insert(c.apsed.end(), design->trees[i].apsed.begin(), design->trees[i].apsed.end());
    }
    std::sort(c.apsed.begin(), c.apsed.end());
    m.census = c;
  }
  if (verification) {
    m.verified = verification->pass();
    m.unrecovered = verification->unrecovered();
  }
  return m;
}

PipelineState run_in_memory(const Topology& t, const DemandSet& demands, Mode mode,
                            std::uint64_t seed, Metric metric, Stage upto) {
  PipelineState st{t, demands, solve_spp(t, demands, metric), {}, {}, {}};
  if (!reaches(upto, Stage::Convert)) return st;
  st.design = form_groups(t, st.spp, mode);
  for (const auto& tree : st.design->trees) st.trails.push_back(build_trails(t, st.spp, tree, seed));
  if (!reaches(upto, Stage::Verify)) return st;
  st.verification = verify_all(t, st.spp, *st.design, st.trails);
  return st;
}

RunResult run_pipeline(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  RunResult result;
  std::string stage = "input";
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(cfg.out_dir) / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (fs::path(cfg.out_dir) / name).string());
    f << text;
    result.artifacts.push_back(name);
  };
  try {
    fs::create_directories(cfg.out_dir);
    Topology t = load_topology(read_file(cfg.topology_path), format_for_path(cfg.topology_path));
    DemandSet demands =
        load_demands(read_file(cfg.demands_path), t, format_for_path(cfg.demands_path));

    PipelineState st{t, demands, {}, {}, {}, {}};
    stage = "solve";
    st.spp = solve_spp(t, demands, cfg.metric);
    json spp = to_json(st.spp);
    spp["scap"] = {{"spare", scap(st.spp, t).spare},
                   {"working", scap(st.spp, t).working},
                   {"percent", scap(st.spp, t).percent}};
    write("spp.json", dump(spp));

    if (reaches(cfg.stage, Stage::Convert)) {
      stage = "convert";
      st.design = form_groups(t, st.spp, cfg.mode);
      write("design.json", dump(to_json(*st.design)));
      json trails = json::array();
      for (const auto& tree : st.design->trees) {
        st.trails.push_back(build_trails(t, st.spp, tree, cfg.seed));
        trails.push_back(to_json(st.trails.back()));
      }
      write("trails.json", dump({{"seed", cfg.seed}, {"groups", trails}}));
    }
    if (reaches(cfg.stage, Stage::Verify)) {
      stage = "verify";
      st.verification = verify_all(t, st.spp, *st.design, st.trails);
      write("verification.json", dump(to_json(*st.verification)));
      write("verification.txt", render_verification(*st.verification, cfg.details));
    }
    result.report = st.metrics();
    if (reaches(cfg.stage, Stage::Report)) {
      stage = "report";
      write("report.json", dump(to_json(*result.report)));
      write("report.txt", render_report(*result.report));
    }
    if (reaches(cfg.stage, Stage::ExportDot)) {
      stage = "export-dot";
      DotDocuments docs = export_dot(t, st.spp, st.trails);
      write("topology.dot", docs.topology);
      for (std::size_t i = 0; i < docs.trails.size(); ++i)
        write("group-" + std::to_string(st.design->groups[i].id) + ".dot", docs.trails[i]);
    }
    if (st.verification && !st.verification->pass()) result.exit_code = kExitVerifyFailed;
  } catch (const NoDisjointPair& e) {
    result.exit_code = kExitInfeasible;
    result.error = stage + ": demand " + std::to_string(e.demand_id()) + ": " + e.what();
  } catch (const InputError& e) {
    result.exit_code = kExitInputError;
    result.error = stage + ": " + e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitError;
    result.error = stage + ": " + e.what();
  }
  return result;
}

}  // namespace cppweave

#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmarkov/classical.hpp"
#include "qmarkov/double_markov.hpp"
#include "qmarkov/entropy.hpp"
#include "qmarkov/errors.hpp"
#include "qmarkov/instance_gen.hpp"
#include "qmarkov/io.hpp"
#include "qmarkov/markov_structure.hpp"
#include "qmarkov/selftest.hpp"
#include "qmarkov/spectral.hpp"
#include "qmarkov/tensor.hpp"

namespace qmarkov::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "A-B-C" or "A-(B,D)-C": three top-level parts separated by '-', commas
// inside parentheses group labels.
MarkovChainSpec parse_chain(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '-' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3 || depth != 0)
    throw ParseError("chain must have the form HEAD-PIVOT-TAIL, got '" + text + "'");

  auto group = [](std::string part) {
    if (!part.empty() && part.front() == '(' && part.back() == ')')
      part = part.substr(1, part.size() - 2);
    std::vector<std::string> labels = split(part, ',');
    for (auto& l : labels)
      if (l.empty()) throw ParseError("empty label in chain group");
    return labels;
  };
  return MarkovChainSpec{group(parts[0]), group(parts[1]), group(parts[2])};
}

std::vector<std::string> parse_labels(const std::string& text) {
  auto labels = split(text, ',');
  for (auto& l : labels)
    if (l.empty()) throw ParseError("empty label in group '" + text + "'");
  return labels;
}

// "d1xd2:w,d1xd2:w" block list.
std::vector<GenBlock> parse_blocks(const std::string& text) {
  std::vector<GenBlock> blocks;
  for (const auto& tok : split(text, ',')) {
    const auto colon = tok.find(':');
    const auto ex = tok.find('x');
    if (colon == std::string::npos || ex == std::string::npos || ex > colon)
      throw ParseError("block must be d1xd2:weight, got '" + tok + "'");
    GenBlock b;
    b.d1 = std::atoi(tok.substr(0, ex).c_str());
    b.d2 = std::atoi(tok.substr(ex + 1, colon - ex - 1).c_str());
    b.weight = std::atof(tok.substr(colon + 1).c_str());
    blocks.push_back(b);
  }
  return blocks;
}

std::string chain_to_string(const MarkovChainSpec& chain) {
  auto group = [](const std::vector<std::string>& labels) {
    if (labels.size() == 1) return labels[0];
    std::string out = "(";
    for (size_t i = 0; i < labels.size(); ++i) {
      if (i) out += ",";
      out += labels[i];
    }
    return out + ")";
  };
  return group(chain.head) + "-" + group(chain.pivot) + "-" + group(chain.tail);
}

nlohmann::json dims_json(const BlockDecomposition& dec) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : dec.blocks)
    blocks.push_back({{"d1", b.d1}, {"d2", b.d2}, {"weight", b.weight}});
  return blocks;
}

struct CommonFlags {
  Tolerances tols;
  std::uint64_t seed = 0;
  std::string report_path;
  std::string out_path;
  bool bits = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tol-cmi", flags.tols.cmi_tol, "Markov-chain CMI tolerance (nats)");
  cmd->add_option("--tol-recon", flags.tols.recon_tol, "reconstruction residual tolerance");
  cmd->add_option("--eig-cutoff", flags.tols.eig_cutoff, "zero-eigenvalue cutoff");
  cmd->add_option("--pos-floor", flags.tols.pos_floor, "strict-positivity floor");
  cmd->add_option("--group-tol", flags.tols.group_tol, "label grouping trace-distance band");
  cmd->add_option("--seed", flags.seed, "random seed (default from QMARKOV_SEED)");
  cmd->add_option("--out", flags.out_path, "output file");
  cmd->add_option("--report", flags.report_path, "write the JSON report here");
  cmd->add_flag("--bits", flags.bits, "also display entropic values in bits");
}

nlohmann::json tols_json(const Tolerances& t) {
  return {{"cmi_tol", t.cmi_tol},       {"recon_tol", t.recon_tol},
          {"eig_cutoff", t.eig_cutoff}, {"pos_floor", t.pos_floor},
          {"group_tol", t.group_tol},   {"match_tol", t.match_tol},
          {"weight_floor", t.weight_floor}};
}

std::string display_value(double nats, bool bits) {
  std::string out = fmt(nats) + " nats";
  if (bits) out += " (" + fmt(nats / std::log(2.0)) + " bits)";
  return out;
}

// Default label groups when none are given: one system per role.
std::vector<std::vector<std::string>> default_groups(const SystemLayout& layout,
                                                     size_t count) {
  if (static_cast<size_t>(layout.count()) != count)
    throw ParseError("state has " + std::to_string(layout.count()) +
                     " systems; pass explicit label groups for " +
                     std::to_string(count) + " roles");
  std::vector<std::vector<std::string>> groups;
  for (int i = 0; i < layout.count(); ++i)
    groups.push_back({layout.system(i).label});
  return groups;
}

}  // namespace

nlohmann::json to_json(const Report& report) {
  nlohmann::json j{{"command", report.command},
                   {"verdict", report.verdict},
                   {"exit_code", report.exit_code},
                   {"seed", report.seed},
                   {"tolerances", report.tolerances},
                   {"diagnostics", report.diagnostics}};
  if (!report.error_kind.empty()) {
    j["error_kind"] = report.error_kind;
    j["error_message"] = report.error_message;
  }
  return j;
}

namespace {

int finish(Report& report, const CommonFlags& flags, std::ostream& out,
           Report* report_out) {
  report.tolerances = tols_json(flags.tols);
  report.seed = flags.seed;
  if (!flags.report_path.empty()) {
    std::ofstream rf(flags.report_path);
    if (rf) rf << to_json(report).dump(2) << "\n";
  }
  if (report.exit_code == 1 && !report.error_kind.empty())
    out << "error: " << report.error_kind << ": " << report.error_message << "\n";
  if (report_out) *report_out = report;
  return report.exit_code;
}

void run_check(const std::string& state_path, const std::string& chain_text,
               const CommonFlags& flags, std::ostream& out, Report& report) {
  const DensityOperator rho = read_state(state_path, flags.tols);
  const MarkovChainSpec chain = parse_chain(chain_text);
  const MarkovVerdict v = assert_markov(rho, chain, flags.tols.cmi_tol,
                                        flags.tols.eig_cutoff);
  out << "chain " << chain_to_string(chain) << ": cmi = "
      << display_value(v.cmi_value, flags.bits) << ", tol = " << fmt(v.tolerance)
      << " -> " << (v.holds ? "holds" : "fails") << "\n";
  report.diagnostics = {{"chain", chain_to_string(chain)},
                        {"cmi", v.cmi_value},
                        {"holds", v.holds}};
  report.verdict = v.holds ? "pass" : "fail";
  report.exit_code = v.holds ? 0 : 2;
}

void run_decompose(const std::string& state_path, const std::string& chain_text,
                   const std::string& x_text, const CommonFlags& flags,
                   std::ostream& out, Report& report) {
  const DensityOperator rho = read_state(state_path, flags.tols);
  BlockDecomposition dec =
      chain_text.empty()
          ? block_decompose(rho, parse_labels(x_text), flags.tols, flags.seed)
          : markov_decompose(rho, parse_chain(chain_text), flags.tols, flags.seed);
  out << "blocks: " << dec.block_count() << "\n";
  for (int k = 0; k < dec.block_count(); ++k) {
    const auto& b = dec.blocks[k];
    out << "  block " << k << ": d1 = " << b.d1 << ", d2 = " << b.d2
        << ", weight = " << fmt(b.weight) << "\n";
  }
  const MinimalityVerdict mv = is_minimal(dec, flags.tols, flags.seed);
  out << "minimal: " << (mv.minimal ? "yes" : "no") << "\n";
  report.diagnostics = {{"blocks", dims_json(dec)}, {"minimal", mv.minimal}};
  report.verdict = "pass";
  report.exit_code = 0;
}

void run_double(const std::string& state_path, std::string a_text,
                std::string b_text, std::string c_text, const CommonFlags& flags,
                std::ostream& out, Report& report) {
  const DensityOperator rho = read_state(state_path, flags.tols);
  std::vector<std::vector<std::string>> groups;
  if (a_text.empty() && b_text.empty() && c_text.empty())
    groups = default_groups(rho.layout(), 3);
  else
    groups = {parse_labels(a_text), parse_labels(b_text), parse_labels(c_text)};

  const CommonLabel cert = certify_double_markov(rho, groups[0], groups[1],
                                                 groups[2], flags.tols, flags.seed);
  out << "common label: |J| = " << cert.label_count() << "\n";
  for (int j = 0; j < cert.label_count(); ++j)
    out << "  j = " << j << ": p = " << fmt(cert.p_j[j])
        << ", rank E_B = " << psd_rank(cert.pvm_b[j], 0.5)
        << ", rank E_C = " << psd_rank(cert.pvm_c[j], 0.5) << "\n";

  const LabelVerdict verdict =
      verify_common_label(rho, cert, groups[0], groups[1], groups[2], flags.tols);
  for (const auto& check : verdict.checks)
    out << "  [" << (check.pass ? "ok" : "FAIL") << "] " << check.name << " ("
        << fmt(check.value) << ")\n";

  nlohmann::json pj = nlohmann::json::array();
  for (double p : cert.p_j) pj.push_back(p);
  report.diagnostics = {{"label_count", cert.label_count()},
                        {"p_j", pj},
                        {"verified", verdict.pass}};
  report.verdict = verdict.pass ? "pass" : "fail";
  report.exit_code = verdict.pass ? 0 : 2;
}

void run_thm2(const std::string& state_path, std::string a_text, std::string b_text,
              std::string c_text, std::string d_text, const CommonFlags& flags,
              std::ostream& out, Report& report) {
  const DensityOperator rho = read_state(state_path, flags.tols);
  std::vector<std::vector<std::string>> groups;
  if (a_text.empty() && b_text.empty() && c_text.empty() && d_text.empty())
    groups = default_groups(rho.layout(), 4);
  else
    groups = {parse_labels(a_text), parse_labels(b_text), parse_labels(c_text),
              parse_labels(d_text)};

  const ConditionalCertificate cert = certify_conditional_double_markov(
      rho, groups[0], groups[1], groups[2], groups[3], flags.tols, flags.seed);
  out << "conditional double markov certificate:\n";
  out << "  blocks on D: " << cert.d_decomposition.block_count() << "\n";
  for (int k = 0; k < cert.d_decomposition.block_count(); ++k) {
    const auto& b = cert.d_decomposition.blocks[k];
    out << "  block " << k << ": d1 = " << b.d1 << ", d2 = " << b.d2
        << ", weight = " << fmt(b.weight) << "\n";
  }
  out << "  I(A;BC|D) = " << display_value(cert.final_cmi, flags.bits) << "\n";

  const ConverseVerdict conv = conditional_converse_check(
      rho, groups[0], groups[1], groups[2], groups[3], flags.tols);
  out << "  converse: I(A;C|BD) = " << fmt(conv.cmi_a_c_given_bd)
      << ", I(A;B|CD) = " << fmt(conv.cmi_a_b_given_cd)
      << (conv.conclusion_ok ? "" : "  [VIOLATION]") << "\n";

  report.diagnostics = {{"blocks", dims_json(cert.d_decomposition)},
                        {"final_cmi", cert.final_cmi},
                        {"cmi_a_c_given_bd", conv.cmi_a_c_given_bd},
                        {"cmi_a_b_given_cd", conv.cmi_a_b_given_cd},
                        {"converse_ok", conv.conclusion_ok}};
  const bool pass = conv.conclusion_ok;
  report.verdict = pass ? "pass" : "fail";
  report.exit_code = pass ? 0 : 2;
}

void run_gen(const std::string& kind, int dim_a, int dim_b, int dim_c,
             const std::string& blocks_text, double delta, const CommonFlags& flags,
             std::ostream& out, Report& report) {
  if (flags.out_path.empty()) throw ParseError("gen requires --out");

  GenSpec spec;
  spec.dim_a = dim_a;
  spec.dim_b = dim_b;
  spec.dim_c = dim_c;
  spec.min_distinguishability = delta;
  spec.seed = flags.seed;
  if (!blocks_text.empty()) spec.blocks = parse_blocks(blocks_text);

  nlohmann::json truth{{"kind", kind}, {"seed", flags.seed}};
  DensityOperator state = [&]() -> DensityOperator {
    if (kind == "markov") {
      MarkovInstance inst = gen_markov_state(spec);
      truth["blocks"] = dims_json(inst.truth);
      return inst.state;
    }
    if (kind == "double") {
      DoubleMarkovInstance inst = gen_double_markov_state(spec);
      truth["label_count"] = inst.truth.label_count();
      nlohmann::json pj = nlohmann::json::array();
      for (double p : inst.truth.p_j) pj.push_back(p);
      truth["p_j"] = pj;
      return inst.state;
    }
    if (kind == "thm2") {
      ConditionalInstance inst = gen_thm2_state(spec, dim_b, dim_c);
      truth["blocks"] = dims_json(inst.truth);
      return inst.state;
    }
    if (kind == "neg-one-way")
      return gen_negative(NegativeKind::one_way_tripartite, flags.seed);
    if (kind == "neg-ghz")
      return gen_negative(NegativeKind::entangled_not_markov, flags.seed);
    if (kind == "neg-thm2-rank")
      return gen_negative(NegativeKind::thm2_rank_deficient, flags.seed);
    throw ParseError("unknown kind '" + kind + "'");
  }();

  write_state(flags.out_path, state);
  std::ofstream truth_file(flags.out_path + ".truth.json");
  if (truth_file) truth_file << truth.dump(2) << "\n";
  out << "wrote " << flags.out_path << " (" << kind << ", dim "
      << state.dim() << ")\n";
  report.diagnostics = {{"kind", kind}, {"dim", state.dim()}, {"truth", truth}};
  report.verdict = "pass";
  report.exit_code = 0;
}

void run_classical(const std::string& pmf_path, const std::string& mode,
                   bool pos_required, const CommonFlags& flags, std::ostream& out,
                   Report& report) {
  const JointPmf pmf = read_pmf(pmf_path);
  if (mode == "label") {
    const ClassicalLabel label =
        common_label_partition(pmf, 1e-10, flags.tols.cmi_tol);
    out << "common label: |J| = " << label.label_count() << "\n";
    nlohmann::json pb = nlohmann::json::array(), pc = nlohmann::json::array();
    for (int j = 0; j < label.label_count(); ++j) {
      out << "  j = " << j << ": B block {";
      for (size_t i = 0; i < label.partition_b[j].size(); ++i)
        out << (i ? "," : "") << label.partition_b[j][i];
      out << "}, C block {";
      for (size_t i = 0; i < label.partition_c[j].size(); ++i)
        out << (i ? "," : "") << label.partition_c[j][i];
      out << "}\n";
      pb.push_back(label.partition_b[j]);
      pc.push_back(label.partition_c[j]);
    }
    report.diagnostics = {{"label_count", label.label_count()},
                          {"partition_b", pb},
                          {"partition_c", pc}};
    report.verdict = "pass";
    report.exit_code = 0;
    return;
  }
  if (mode == "conditional") {
    const ClassicalConditionalVerdict v = conditional_double_markov_check(
        pmf, pos_required, flags.tols.cmi_tol, 1e-10);
    out << "I(A;C|B,D) = " << fmt(v.cmi_c_given_bd) << " -> "
        << (v.chain_bd_holds ? "holds" : "fails") << "\n";
    out << "I(A;B|C,D) = " << fmt(v.cmi_b_given_cd) << " -> "
        << (v.chain_cd_holds ? "holds" : "fails") << "\n";
    out << "max |p(a|b,c,d) - p(a|d)| = " << fmt(v.max_conditional_dev) << " -> "
        << (v.conclusion_holds ? "holds" : "fails") << "\n";
    report.diagnostics = {{"cmi_c_given_bd", v.cmi_c_given_bd},
                          {"cmi_b_given_cd", v.cmi_b_given_cd},
                          {"max_conditional_dev", v.max_conditional_dev},
                          {"holds", v.holds()}};
    report.verdict = v.holds() ? "pass" : "fail";
    report.exit_code = v.holds() ? 0 : 2;
    return;
  }
  throw ParseError("classical --mode must be 'label' or 'conditional'");
}

void run_selftest(const CommonFlags& flags, std::ostream& out, Report& report) {
  const auto results = run_acceptance(out, flags.seed ? flags.seed : 20240501);
  nlohmann::json list = nlohmann::json::array();
  bool pass = !results.empty();
  for (const auto& r : results) {
    list.push_back({{"index", r.index}, {"name", r.name}, {"pass", r.pass}});
    pass = pass && r.pass;
  }
  report.diagnostics = {{"criteria", list}};
  report.verdict = pass ? "pass" : "fail";
  report.exit_code = pass ? 0 : 2;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                Report* report_out) {
  CommonFlags flags;
  if (const char* env_seed = std::getenv("QMARKOV_SEED"))
    flags.seed = std::strtoull(env_seed, nullptr, 10);

  Report report;
  {
    std::ostringstream echo;
    echo << "qmarkov";
    for (const auto& a : args) echo << ' ' << a;
    report.command = echo.str();
  }

  CLI::App app{"quantum Markov structure toolkit"};
  app.require_subcommand(1);

  std::string state_path, chain_text, x_text;
  std::string a_text, b_text, c_text, d_text;
  std::string kind, blocks_text, pmf_path, mode = "label";
  int dim_a = 2, dim_b = 2, dim_c = 2;
  double delta = 0.1;
  bool pos_required = true;

  auto* check = app.add_subcommand("check", "CMI of a Markov chain on a state file");
  check->add_option("--state", state_path, "QSTATE v1 file")->required();
  check->add_option("--chain", chain_text, "chain HEAD-PIVOT-TAIL")->required();
  add_common_flags(check, flags);

  auto* decompose =
      app.add_subcommand("decompose", "block decomposition of a state");
  decompose->add_option("--state", state_path, "QSTATE v1 file")->required();
  decompose->add_option("--chain", chain_text, "Markov chain to decompose");
  decompose->add_option("--x", x_text, "X-side labels for a bipartite split");
  add_common_flags(decompose, flags);

  auto* dbl = app.add_subcommand("double", "double-Markov common-label certificate");
  dbl->add_option("--state", state_path, "QSTATE v1 file")->required();
  dbl->add_option("--a", a_text, "labels of the A side");
  dbl->add_option("--b", b_text, "labels of the B side");
  dbl->add_option("--c", c_text, "labels of the C side");
  add_common_flags(dbl, flags);

  auto* thm2 = app.add_subcommand(
      "thm2", "four-party conditional double-Markov certificate");
  thm2->add_option("--state", state_path, "QSTATE v1 file")->required();
  thm2->add_option("--a", a_text, "labels of the A side");
  thm2->add_option("--b", b_text, "labels of the B side");
  thm2->add_option("--c", c_text, "labels of the C side");
  thm2->add_option("--d", d_text, "labels of the D side");
  add_common_flags(thm2, flags);

  auto* gen = app.add_subcommand("gen", "generate instances with ground truth");
  gen->add_option("--kind", kind,
                  "markov | double | thm2 | neg-one-way | neg-ghz | neg-thm2-rank")
      ->required();
  gen->add_option("--dim-a", dim_a, "dimension of A");
  gen->add_option("--dim-b", dim_b, "dimension of B");
  gen->add_option("--dim-c", dim_c, "dimension of C");
  gen->add_option("--blocks", blocks_text, "blocks d1xd2:w,d1xd2:w,...");
  gen->add_option("--delta", delta, "trace-distance floor between label states");
  add_common_flags(gen, flags);

  auto* classical = app.add_subcommand("classical", "classical PMF oracles");
  classical->add_option("--pmf", pmf_path, "QPMF v1 file")->required();
  classical->add_option("--mode", mode, "label | conditional");
  classical->add_flag("--pos-required,!--no-pos-required", pos_required,
                      "require strictly positive cells (conditional mode)");
  add_common_flags(classical, flags);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance property suite");
  add_common_flags(selftest, flags);

  std::vector<const char*> argv;
  argv.push_back("qmarkov");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    report.error_kind = "UsageError";
    report.error_message = e.what();
    report.verdict = "error";
    report.exit_code = 1;
    return finish(report, flags, out, report_out);
  }

  try {
    if (check->parsed()) run_check(state_path, chain_text, flags, out, report);
    else if (decompose->parsed()) {
      if (chain_text.empty() == x_text.empty())
        throw ParseError("decompose needs exactly one of --chain or --x");
      run_decompose(state_path, chain_text, x_text, flags, out, report);
    } else if (dbl->parsed())
      run_double(state_path, a_text, b_text, c_text, flags, out, report);
    else if (thm2->parsed())
      run_thm2(state_path, a_text, b_text, c_text, d_text, flags, out, report);
    else if (gen->parsed())
      run_gen(kind, dim_a, dim_b, dim_c, blocks_text, delta, flags, out, report);
    else if (classical->parsed())
      run_classical(pmf_path, mode, pos_required, flags, out, report);
    else if (selftest->parsed())
      run_selftest(flags, out, report);
  } catch (const NotMarkovError& e) {
    // A failed chain is the well-formed negative for the certifiers.
    report.error_kind = e.kind();
    report.error_message = e.what();
    report.verdict = "fail";
    report.exit_code = 2;
    out << "not markov: " << e.what() << "\n";
  } catch (const Error& e) {
    report.error_kind = e.kind();
    report.error_message = e.what();
    report.verdict = "error";
    report.exit_code = 1;
  } catch (const std::exception& e) {
    report.error_kind = "InternalError";
    report.error_message = e.what();
    report.verdict = "error";
    report.exit_code = 1;
  }
  return finish(report, flags, out, report_out);
}

}  // namespace qmarkov::cli

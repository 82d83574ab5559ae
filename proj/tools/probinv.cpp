#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "probinv/analysis.hpp"
#include "probinv/oracle.hpp"
#include "probinv/parser.hpp"
#include "probinv/refinement.hpp"
#include "probinv/report.hpp"

namespace fs = std::filesystem;
using namespace probinv;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kNegative = 1,
  kUsage = 2,
  kInput = 3,
  kInconclusive = 4,
  kInapplicable = 5,
  kLimit = 6,
  kInternal = 70,
};

struct Common {
  std::string solver;
  std::string dump_smt;
  unsigned solver_timeout_ms = 0;
  std::size_t oracle_cap = 100000;

  SolverOptions options() const {
    SolverOptions o;
    o.executable = solver;
    o.dump_path = dump_smt;
    o.timeout_ms = solver_timeout_ms;
    return o;
  }
};

struct Loaded {
  LoopProgram program;
  std::unique_ptr<Feasibility> feas;
  Property property;
};

Loaded load(const std::string& program_path, const std::string& property_path, const Common& c) {
  Loaded l;
  ParseOptions po;
  po.solver = c.options();
  l.program = parse_program(read_file(program_path), po);
  l.feas = std::make_unique<Feasibility>(l.program.names(), c.options());
  l.property = parse_property(read_file(property_path), l.program, *l.feas);
  return l;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--solver", c.solver, "SMT-LIB2 solver executable (default: $PROBINV_SOLVER, then z3)");
  app->add_option("--dump-smt", c.dump_smt, "Directory receiving one .smt2 script per solver session")
      ->check(CLI::ExistingDirectory);
  app->add_option("--solver-timeout", c.solver_timeout_ms, "Per check-sat limit in milliseconds (0: none)");
  app->add_option("--oracle-cap", c.oracle_cap, "Largest guard region the explicit oracle enumerates");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

State initial_state(const LoopProgram& p) {
  State s(p.num_vars());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = p.lower_bound(static_cast<VarId>(i));
  return s;
}

/// Oracle verdict for a concrete candidate, or "skipped" with a reason.
json oracle_verdict(const Loaded& l, const PiecewiseTemplate& inv, const Common& c) {
  if (!is_finite_state(l.program, *l.feas)) return {{"verdict", "skipped"}, {"reason", "infinite-state loop"}};
  try {
    const auto chain = build_chain(l.program, l.property.post, c.oracle_cap);
    const auto cex = pointwise_check(inv, chain, l.property.pre);
    json j{{"verdict", cex ? "violated" : "admissible"}, {"states", chain.states.size()}};
    if (cex) j["counterexample"] = to_json(*cex, l.program.names());
    return j;
  } catch (const OracleError& e) {
    return {{"verdict", "skipped"}, {"reason", e.what()}};
  }
}

// synthesize

struct SynthArgs {
  std::string program, property, strategy = "inductivity", synth = "plain", coop_d = "2", out_dir, trace;
  std::size_t budget = 5000;
  double timeout = 0;
  int rounds = 8;
  bool json_out = false;
  bool quiet = false;
};

int cmd_synthesize(const SynthArgs& a, const Common& c) {
  Loaded l = load(a.program, a.property, c);
  const auto names = l.program.names();
  OuterConfig oc;
  oc.strategy = parse_strategy(a.strategy);
  oc.max_rounds = a.rounds;
  oc.timeout_s = a.timeout;
  oc.cegis.mode = a.synth == "safe" ? SynthMode::Safe : SynthMode::Plain;
  if (a.coop_d == "off") {
    oc.cegis.coop_d.reset();
  } else {
    oc.cegis.coop_d = parse_rational(a.coop_d);
  }
  oc.cegis.budget = a.budget;
  try {
    oc.cegis.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--coop-d/--budget", e.what());
  }
  oc.cegis.solver = c.options();
  std::ofstream trace_file, log_file;
  if (!a.trace.empty()) {
    trace_file.open(a.trace);
    oc.cegis.trace = &trace_file;
  }
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    log_file.open(fs::path(a.out_dir) / "templates.txt");
    oc.log = &log_file;
    if (a.trace.empty()) {
      trace_file.open(fs::path(a.out_dir) / "trace.jsonl");
      oc.cegis.trace = &trace_file;
    }
  }

  const OuterResult r = outer_loop(l.program, l.property.post, l.property.pre, *l.feas, oc);

  json summary{{"program", a.program},
               {"property", a.property},
               {"strategy", a.strategy},
               {"synth", a.synth},
               {"coop_d", a.coop_d == "off" ? json(nullptr) : json(to_string(*oc.cegis.coop_d))},
               {"outcome", to_string(r.outcome)},
               {"counterexamples", r.counterexamples.size()},
               {"total_counterexamples", r.total_counterexamples},
               {"pieces", r.outcome == OuterResult::Outcome::Invariant ? r.invariant.size() : 0},
               {"rounds", json::array()},
               {"wall_time_s", r.elapsed_s},
               {"message", r.message},
               {"invariant", nullptr}};
  for (const auto& rec : r.rounds) summary["rounds"].push_back(to_json(rec));

  int code = r.outcome == OuterResult::Outcome::Invariant  ? kOk
             : r.outcome == OuterResult::Outcome::Exhausted ? kNegative
                                                            : kInconclusive;
  if (r.outcome == OuterResult::Outcome::Invariant) {
    summary["invariant"] = to_json(r.invariant, names);
    const State s0 = initial_state(l.program);
    summary["initial_state"] = to_json(s0, names);
    summary["initial_value"] = to_json(evaluate(r.invariant, s0));
    // independent re-verification in fresh sessions
    Feasibility fresh(names, c.options());
    const auto psi = char_fun(l.program, l.property.post, r.invariant, fresh);
    Verifier v(l.program, l.property.post, l.property.pre, c.options());
    const auto vr = v.verify(r.invariant, psi);
    const char* smt = vr.admissible() ? "admissible"
                      : vr.status == VerifyResult::Status::Violated ? "violated"
                                                                     : "inconclusive";
    summary["recheck"] = {{"smt", smt}, {"oracle", oracle_verdict(l, r.invariant, c)}};
    if (!vr.admissible()) code = kInternal;
  }
  if (!a.out_dir.empty()) {
    write_file(fs::path(a.out_dir) / "summary.json", summary.dump(2) + "\n");
    if (r.outcome == OuterResult::Outcome::Invariant) {
      write_file(fs::path(a.out_dir) / "invariant.txt", to_multiline_string(r.invariant, names));
      write_file(fs::path(a.out_dir) / "invariant.json", to_json(r.invariant, names).dump(2) + "\n");
    }
  }
  if (a.json_out) {
    std::cout << summary.dump() << "\n";
  } else if (!a.quiet) {
    std::cout << "outcome: " << to_string(r.outcome);
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << "\nrounds: " << r.rounds.size() << ", |S'| = " << r.counterexamples.size()
              << " (total " << r.total_counterexamples << "), time " << r.elapsed_s << " s\n";
    if (r.outcome == OuterResult::Outcome::Invariant) {
      std::cout << "|I| = " << r.invariant.size() << ", I(s0) = " << summary["initial_value"].get<std::string>()
                << "\nrecheck: smt " << summary["recheck"]["smt"].get<std::string>() << ", oracle "
                << summary["recheck"]["oracle"]["verdict"].get<std::string>() << "\n"
                << to_multiline_string(r.invariant, names);
    }
  }
  return code;
}

// verify

int cmd_verify(const std::string& program, const std::string& property, const std::string& invariant, bool json_out,
               const Common& c) {
  Loaded l = load(program, property, c);
  const auto names = l.program.names();
  const PiecewiseTemplate inv = parse_expectation(read_file(invariant), l.program, *l.feas);
  if (has_infinity(inv)) throw ParseError("an invariant may not contain INF pieces", 1, 1);
  const auto psi = char_fun(l.program, l.property.post, inv, *l.feas);
  Verifier v(l.program, l.property.post, l.property.pre, c.options());
  const auto vr = v.verify(inv, psi);
  json j{{"program", program}, {"property", property}, {"invariant", to_json(inv, names)}};
  json smt{{"verdict", vr.admissible() ? "admissible"
                       : vr.status == VerifyResult::Status::Violated ? "violated"
                                                                      : "inconclusive"}};
  if (vr.cex) smt["counterexample"] = to_json(*vr.cex, names);
  if (!vr.diagnostics.empty()) smt["diagnostics"] = vr.diagnostics;
  j["smt"] = smt;
  j["oracle"] = oracle_verdict(l, inv, c);
  const std::string ov = j["oracle"]["verdict"];
  const bool disagree = ov != "skipped" && vr.status != VerifyResult::Status::Inconclusive && ov != smt["verdict"];
  j["agree"] = !disagree;
  if (json_out) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "smt: " << smt["verdict"].get<std::string>() << "\n";
    if (vr.cex) {
      std::cout << "  " << to_string(vr.cex->kind) << " violated at";
      for (std::size_t i = 0; i < names.size(); ++i) std::cout << " " << names[i] << "=" << vr.cex->state[i];
      std::cout << ": I = " << to_string(vr.cex->value) << ", Phi(I) = " << to_string(vr.cex->phi)
                << ", g = " << to_string(vr.cex->bound) << "\n";
    }
    std::cout << "oracle: " << ov;
    if (j["oracle"].contains("reason")) std::cout << " (" << j["oracle"]["reason"].get<std::string>() << ")";
    std::cout << "\n";
  }
  if (disagree) return kInternal;
  if (vr.status == VerifyResult::Status::Inconclusive) return kInconclusive;
  return vr.admissible() ? kOk : kNegative;
}

// oracle

int cmd_oracle(const std::string& program, const std::string& property, const std::string& state_text,
               const std::string& dump, bool json_out, const Common& c) {
  Loaded l = load(program, property, c);
  const auto names = l.program.names();
  if (!l.program.all_bounded()) throw OracleError("the oracle needs declared bounds on every variable");
  const auto chain = build_chain(l.program, l.property.post, c.oracle_cap);
  if (!dump.empty()) {
    std::ofstream out(dump);
    dump_chain(out, chain);
  }
  const auto values = exact_lfp(chain);
  const State s = parse_state(state_text, names, initial_state(l.program));
  Rational lfp;
  if (const auto k = chain.find(s)) {
    lfp = values[*k];
  } else {
    const ExtendedRational f = evaluate(l.property.post, s);
    lfp = f.value();  // outside the guard the loop does not run
  }
  const ExtendedRational g = evaluate(l.property.pre, s);
  json j{{"program", program},
         {"property", property},
         {"guard_states", chain.guard_count},
         {"frontier_states", chain.states.size() - chain.guard_count},
         {"transitions", chain.transitions()},
         {"state", to_json(s, names)},
         {"lfp", to_string(lfp)},
         {"g", to_json(g)},
         {"within_bound", ExtendedRational(lfp) <= g}};
  if (json_out) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "|S_phi| = " << chain.guard_count << ", frontier " << chain.states.size() - chain.guard_count
              << ", transitions " << chain.transitions() << "\nlfp = " << to_string(lfp) << "\ng = " << to_string(g)
              << (j["within_bound"].get<bool>() ? " (bound holds)" : " (bound violated)") << "\n";
  }
  return j["within_bound"].get<bool>() ? kOk : kNegative;
}

// dump-phi

int cmd_dump_phi(const std::string& program, const std::string& property, const std::string& which,
                 const std::string& invariant, const Common& c) {
  Loaded l = load(program, property, c);
  const auto names = l.program.names();
  PiecewiseTemplate t;
  if (!invariant.empty()) {
    t = parse_expectation(read_file(invariant), l.program, *l.feas);
  } else {
    TemplateBuilder b(l.program, l.property.post, *l.feas);
    const auto colon = which.find(':');
    const std::string kind = which.substr(0, colon);
    const int n = colon == std::string::npos ? 1 : std::stoi(which.substr(colon + 1));
    if (kind == "initial") {
      t = b.initial();
    } else if (kind == "static") {
      t = b.refine_static(n);
    } else if (kind == "dynamic") {
      t = b.refine_dynamic(n);
    } else {
      throw CLI::ValidationError("--template", "expected initial, static:<i> or dynamic:<round>");
    }
  }
  std::cout << "T:\n" << to_multiline_string(t, names) << "Psi_f(T):\n"
            << to_multiline_string(char_fun(l.program, l.property.post, t, *l.feas), names);
  return kOk;
}

// one-shot

int cmd_one_shot(const std::string& program, const std::string& property, std::size_t cap, bool json_out,
                 const Common& c) {
  Loaded l = load(program, property, c);
  const auto names = l.program.names();
  TemplateBuilder b(l.program, l.property.post, *l.feas);
  const auto t = b.initial();
  const auto psi = char_fun(l.program, l.property.post, t, *l.feas);
  const auto r = one_shot(l.program, t, psi, l.property.pre, *l.feas, c.options(), cap);
  json j{{"program", program}, {"property", property}, {"status", to_string(r.status)}, {"conjuncts", r.conjuncts},
         {"message", r.message}, {"valuation", to_json(r.valuation)}};
  int code = r.status == OneShotResult::Status::Found      ? kOk
             : r.status == OneShotResult::Status::None     ? kNegative
             : r.status == OneShotResult::Status::Refused  ? kLimit
                                                           : kInconclusive;
  if (r.status == OneShotResult::Status::Found) {
    const auto inv = instantiate(t, r.valuation);
    j["invariant"] = to_json(inv, names);
    Verifier v(l.program, l.property.post, l.property.pre, c.options());
    const auto vr = v.verify(inv, instantiate(psi, r.valuation));
    j["recheck"] = vr.admissible() ? "admissible" : "not admissible";
    if (!vr.admissible()) code = kInternal;
  }
  if (json_out) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "one-shot: " << to_string(r.status) << " (" << r.conjuncts << " conjuncts)";
    if (!r.message.empty()) std::cout << " " << r.message;
    std::cout << "\n";
    if (j.contains("invariant")) std::cout << to_multiline_string(instantiate(t, r.valuation), names);
  }
  return code;
}

// bench

struct Cell {
  std::string benchmark, property, strategy, synth;
  fs::path program_path, property_path;
};

struct CellResult {
  int exit_code = -1;
  bool timed_out = false;
  double wall_time_s = 0;  // as seen by the parent
  json summary;
};

CellResult run_cell(const Cell& cell, double timeout, const std::vector<std::string>& extra) {
  std::vector<std::string> args{"/proc/self/exe", "synthesize", cell.program_path.string(),
                                cell.property_path.string(), "--strategy", cell.strategy,
                                "--synth", cell.synth, "--json", "--timeout", std::to_string(timeout)};
  args.insert(args.end(), extra.begin(), extra.end());
  int pipefd[2];
  if (pipe(pipefd) != 0) throw std::runtime_error("pipe failed");
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    dup2(pipefd[1], STDOUT_FILENO);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> argv;
    for (auto& s : args) argv.push_back(const_cast<char*>(s.c_str()));
    argv.push_back(nullptr);
    execv(argv[0], argv.data());
    _exit(127);
  }
  close(pipefd[1]);
  const auto start = std::chrono::steady_clock::now();
  CellResult r;
  std::string output;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout + 15);
  char buf[4096];
  for (;;) {
    pollfd p{pipefd[0], POLLIN, 0};
    const int ready = poll(&p, 1, 200);
    if (ready > 0) {
      const ssize_t n = read(pipefd[0], buf, sizeof buf);
      if (n <= 0) break;
      output.append(buf, static_cast<std::size_t>(n));
    }
    if (std::chrono::steady_clock::now() > deadline) {
      r.timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
  }
  close(pipefd[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto nl = output.find('\n');
  if (nl != std::string::npos) r.summary = json::parse(output.substr(0, nl), nullptr, false);
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

int cmd_bench(const std::string& corpus, const std::vector<std::string>& strategies,
              const std::vector<std::string>& modes, double timeout, unsigned jobs, const std::string& csv_path,
              const std::string& json_path, const Common& c) {
  std::vector<Cell> cells;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(corpus))
    if (e.is_directory() && fs::exists(e.path() / "program.pgcl")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    std::vector<fs::path> props;
    for (const auto& e : fs::directory_iterator(d)) {
      const auto name = e.path().filename().string();
      if (name.rfind("prop", 0) == 0 && e.path().extension() == ".txt") props.push_back(e.path());
    }
    std::sort(props.begin(), props.end());
    for (const auto& p : props)
      for (const auto& s : strategies)
        for (const auto& m : modes)
          cells.push_back({d.filename().string(), p.stem().string(), s, m, d / "program.pgcl", p});
  }
  std::vector<std::string> extra;
  if (!c.solver.empty()) extra.insert(extra.end(), {"--solver", c.solver});
  if (c.solver_timeout_ms > 0) extra.insert(extra.end(), {"--solver-timeout", std::to_string(c.solver_timeout_ms)});
  extra.insert(extra.end(), {"--oracle-cap", std::to_string(c.oracle_cap)});

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < std::max(1u, jobs); ++w)
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < cells.size(); k = next++) results[k] = run_cell(cells[k], timeout, extra);
    });
  for (auto& w : workers) w.join();

  json rows = json::array();
  std::ostringstream csv;
  csv << "benchmark,property,strategy,synth,status,exit_code,counterexamples,total_counterexamples,pieces,rounds,"
         "wall_time_s\n";
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& cell = cells[k];
    const auto& r = results[k];
    const bool have = r.summary.is_object();
    std::string status = r.timed_out ? "timeout" : have ? r.summary["outcome"].get<std::string>() : "error";
    if (!have && !r.timed_out) {
      if (r.exit_code == kInapplicable) status = "inapplicable";
      if (r.exit_code == kInput) status = "input-error";
      if (r.exit_code == kLimit) status = "resource-limit";
      if (r.exit_code == kInconclusive) status = "inconclusive";
    }
    json row{{"benchmark", cell.benchmark},
             {"property", cell.property},
             {"strategy", cell.strategy},
             {"synth", cell.synth},
             {"status", status},
             {"exit_code", r.exit_code},
             {"counterexamples", have ? r.summary["counterexamples"] : json(nullptr)},
             {"total_counterexamples", have ? r.summary["total_counterexamples"] : json(nullptr)},
             {"pieces", have ? r.summary["pieces"] : json(nullptr)},
             {"rounds", have ? json(r.summary["rounds"].size()) : json(nullptr)},
             {"wall_time_s", have ? r.summary["wall_time_s"] : json(r.wall_time_s)}};
    rows.push_back(row);
    auto field = [&](const char* key) { return row[key].is_null() ? std::string() : row[key].dump(); };
    csv << csv_escape(cell.benchmark) << "," << csv_escape(cell.property) << "," << cell.strategy << ","
        << cell.synth << "," << status << "," << r.exit_code << "," << field("counterexamples") << ","
        << field("total_counterexamples") << "," << field("pieces") << "," << field("rounds") << ","
        << field("wall_time_s") << "\n";
  }
  if (!csv_path.empty()) {
    write_file(csv_path, csv.str());
  } else {
    std::cout << csv.str();
  }
  if (!json_path.empty()) write_file(json_path, json{{"cells", rows}}.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative inductive invariants for probabilistic loops"};
  app.require_subcommand(1);
  Common common;

  SynthArgs sa;
  auto* syn = app.add_subcommand("synthesize", "Synthesize an inductive invariant proving the property");
  syn->add_option("program", sa.program)->required()->check(CLI::ExistingFile);
  syn->add_option("property", sa.property)->required()->check(CLI::ExistingFile);
  syn->add_option("--strategy", sa.strategy, "Template refinement")
      ->check(CLI::IsMember({"static", "dynamic", "inductivity"}))
      ->capture_default_str();
  syn->add_option("--synth", sa.synth, "Synthesizer")->check(CLI::IsMember({"plain", "safe"}))->capture_default_str();
  syn->add_option("--coop-d", sa.coop_d, "Cooperative verifier distance factor, or off")->capture_default_str();
  syn->add_option("--budget", sa.budget, "Counterexamples per CEGIS run")->capture_default_str();
  syn->add_option("--timeout", sa.timeout, "Wall-clock limit in seconds (0: none)");
  syn->add_option("--rounds", sa.rounds, "Refinement round cap")->capture_default_str();
  syn->add_option("--out", sa.out_dir, "Directory for invariant, summary, templates and trace");
  syn->add_option("--trace", sa.trace, "JSON-lines trace file");
  syn->add_flag("--json", sa.json_out, "Print the summary record as JSON");
  add_common(syn, common);

  std::string vprog, vprop, vinv;
  bool vjson = false;
  auto* ver = app.add_subcommand("verify", "Check a concrete invariant");
  ver->add_option("program", vprog)->required()->check(CLI::ExistingFile);
  ver->add_option("property", vprop)->required()->check(CLI::ExistingFile);
  ver->add_option("invariant", vinv)->required()->check(CLI::ExistingFile);
  ver->add_flag("--json", vjson);
  add_common(ver, common);

  std::string oprog, oprop, ostate, odump;
  bool ojson = false;
  auto* orc = app.add_subcommand("oracle", "Exact least fixed point on the explicit Markov chain");
  orc->add_option("program", oprog)->required()->check(CLI::ExistingFile);
  orc->add_option("property", oprop)->required()->check(CLI::ExistingFile);
  orc->add_option("--state", ostate, "Evaluation state, e.g. a=0,b=0 (default: lower bounds)");
  orc->add_option("--dump-chain", odump, "Write transitions as 'src dst p/q' lines");
  orc->add_flag("--json", ojson);
  add_common(orc, common);

  std::string dprog, dprop, dwhich = "initial", dinv;
  auto* dph = app.add_subcommand("dump-phi", "Print a template and its characteristic functional");
  dph->add_option("program", dprog)->required()->check(CLI::ExistingFile);
  dph->add_option("property", dprop)->required()->check(CLI::ExistingFile);
  dph->add_option("--template", dwhich, "initial, static:<i> or dynamic:<round>")->capture_default_str();
  dph->add_option("--invariant", dinv, "Use a concrete expectation file instead")->check(CLI::ExistingFile);
  add_common(dph, common);

  std::string sprog, sprop;
  std::size_t scap = 1000000;
  bool sjson = false;
  auto* one = app.add_subcommand("one-shot", "Solve the initial template in a single query");
  one->add_option("program", sprog)->required()->check(CLI::ExistingFile);
  one->add_option("property", sprop)->required()->check(CLI::ExistingFile);
  one->add_option("--cap", scap, "Largest number of guard states expanded")->capture_default_str();
  one->add_flag("--json", sjson);
  add_common(one, common);

  std::string corpus, bcsv, bjson;
  std::vector<std::string> strategies{"static", "dynamic", "inductivity"}, modes{"plain", "safe"};
  double btimeout = 120;
  unsigned jobs = 1;
  auto* ben = app.add_subcommand("bench", "Run every (program, property, strategy, synthesizer) cell");
  ben->add_option("corpus", corpus)->required()->check(CLI::ExistingDirectory);
  ben->add_option("--strategies", strategies)->delimiter(',');
  ben->add_option("--modes", modes)->delimiter(',');
  ben->add_option("--timeout", btimeout, "Seconds per cell")->capture_default_str();
  ben->add_option("--jobs", jobs, "Cells run in parallel")->capture_default_str();
  ben->add_option("--csv", bcsv, "CSV output (default: stdout)");
  ben->add_option("--json", bjson, "JSON output");
  add_common(ben, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*syn) return cmd_synthesize(sa, common);
    if (*ver) return cmd_verify(vprog, vprop, vinv, vjson, common);
    if (*orc) return cmd_oracle(oprog, oprop, ostate, odump, ojson, common);
    if (*dph) return cmd_dump_phi(dprog, dprop, dwhich, dinv, common);
    if (*one) return cmd_one_shot(sprog, sprop, scap, sjson, common);
    if (*ben) return cmd_bench(corpus, strategies, modes, btimeout, jobs, bcsv, bjson, common);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kInput;
  } catch (const UnderflowError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kInput;
  } catch (const StrategyError& e) {
    std::cerr << "strategy inapplicable: " << e.what() << "\n";
    return kInapplicable;
  } catch (const OracleError& e) {
    std::cerr << "oracle: " << e.what() << "\n";
    return kLimit;
  } catch (const SolverError& e) {
    std::cerr << "solver: " << e.what() << "\n";
    return kInconclusive;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

#include "tempodag/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "tempodag/reports.hpp"
#include "tempodag/spec_format.hpp"

namespace tempodag::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotADag:
    case ErrorCode::UnresolvableWithMixing:
      return kCyclic;
    case ErrorCode::AlreadyAcyclic:
      return kNothingToDo;
    case ErrorCode::ConflictingOrientations:
      return kViolations;
    default:
      return kInvalidInput;
  }
}

bool use_color(const Environment& env, std::ostream& err) {
  if (!env.color || *env.color == "auto") return env.out_is_tty;
  if (*env.color == "always") return true;
  if (*env.color == "never") return false;
  err << "warning: TEMPODAG_COLOR must be auto, never or always; got '" << *env.color << "', using auto\n";
  return env.out_is_tty;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open file for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::IoError, "read failed");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

struct Input {
  std::string text;
  SystemSpec spec;
  LoadedSystem loaded;
};

Input load(const std::string& path) {
  std::string text = read_file(path);
  SystemSpec spec = parse_spec(text);
  LoadedSystem loaded = build(spec);
  return {std::move(text), std::move(spec), std::move(loaded)};
}

const LinearScm& require_scm(const Input& in) {
  if (!in.loaded.scm) throw SpecError(ErrorCode::MissingScm, "this command needs an 'scm' block", "");
  return *in.loaded.scm;
}

struct Options {
  std::string path;
  bool json = false;
  // unroll
  std::optional<std::string> var;
  std::optional<std::int64_t> at;
  bool automatic = false;
  std::optional<std::string> out_path;
  // faithfulness
  std::optional<std::size_t> max_conditioning;
  // discover / simulate
  bool exact = false;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  double alpha = 0.01;
};

std::string default_unroll_path(const std::string& input) {
  std::filesystem::path p(input);
  return (p.parent_path() / (p.stem().string() + ".unrolled.json")).string();
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Input in = load(o.path);
  if (o.json)
    out << report::dump({{"command", "validate"}, {"valid", true}, {"variables", in.loaded.system.size()}});
  else
    out << "OK\n";
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out, const report::Style& style) {
  const Input in = load(o.path);
  const SystemClassification c = classify_system(in.loaded.system);
  if (o.json)
    out << report::dump(report::classify_json(in.loaded.system, c));
  else
    report::classify_text(out, in.loaded.system, c, style);
  return c.composite_is_dag ? kOk : kCyclic;
}

int cmd_unroll(const Options& o, std::ostream& out, const report::Style& style) {
  if (o.automatic == (o.var.has_value() || o.at.has_value()))
    fail(ErrorCode::BadArgument, "give either --auto or both --var and --at");
  if (!o.automatic && !(o.var && o.at)) fail(ErrorCode::BadArgument, "--var and --at must be given together");
  const Input in = load(o.path);
  const VariableSystem& system = in.loaded.system;

  report::UnrollOutcome u;
  if (o.automatic)
    u.steps = suggest_unrolling(system);
  else
    u.steps = {{*o.var, split_at(system.variable(*o.var), TimePoint(*o.at))}};
  const VariableSystem unrolled = apply_unrolling(system, u.steps);
  u.before = derive_composite_graph(system);
  u.after = derive_composite_graph(unrolled);
  u.output_path = o.out_path.value_or(default_unroll_path(o.path));
  write_file(u.output_path, serialize_spec(unrolled_spec(in.spec, unrolled)));

  if (o.json)
    out << report::dump(report::unroll_json(u));
  else
    report::unroll_text(out, u, style);
  return u.after.is_dag() ? kOk : kCyclic;
}

int cmd_faithfulness(const Options& o, std::ostream& out, const report::Style& style) {
  const Input in = load(o.path);
  const auto violations = audit_faithfulness(in.loaded.system, require_scm(in), {o.max_conditioning});
  if (o.json)
    out << report::dump(report::faithfulness_json(violations));
  else
    report::faithfulness_text(out, violations, style);
  return violations.empty() ? kOk : kViolations;
}

int cmd_discover(const Options& o, std::ostream& out, const report::Style& style) {
  if (o.exact == o.samples.has_value()) fail(ErrorCode::BadArgument, "give either --exact or --samples N");
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) fail(ErrorCode::BadArgument, "--alpha must lie in (0, 1)");
  const Input in = load(o.path);
  const VariableSystem& system = in.loaded.system;
  const LinearScm& scm = require_scm(in);
  std::vector<std::string> names;
  for (const auto& v : system.variables()) names.push_back(v.name());

  report::DiscoveryOutcome d;
  if (o.exact) {
    const ExactOracle oracle(system, scm);
    d.skeleton = pc_skeleton(ExactIndependence(oracle), names);
  } else {
    const EmpiricalOracle oracle(sample(system, scm, o.seed, *o.samples));
    d.skeleton = pc_skeleton(FisherZIndependence(oracle, o.alpha), names);
    d.empirical = report::EmpiricalSettings{*o.samples, o.seed, o.alpha};
  }
  d.v_structures = find_v_structures(d.skeleton);
  d.pdag = orient(d.skeleton);
  d.temporal = temporal_consistency_report(d.pdag, system);

  if (o.json)
    out << report::dump(report::discover_json(d));
  else
    report::discover_text(out, d, style);
  return d.temporal.empty() ? kOk : kViolations;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.json && !o.out_path) fail(ErrorCode::BadArgument, "--json needs --out; CSV and JSON never share a stream");
  const Input in = load(o.path);
  const RealizationBatch batch = sample(in.loaded.system, require_scm(in), o.seed, *o.samples);
  if (!o.out_path) {
    write_csv(batch, out);
    return kOk;
  }
  std::ostringstream csv;
  write_csv(batch, csv);
  write_file(*o.out_path, csv.str());
  if (o.json)
    out << report::dump({{"command", "simulate"},
                         {"samples", batch.count},
                         {"seed", batch.seed},
                         {"variables", batch.variable_names},
                         {"output", *o.out_path}});
  else
    out << "Wrote " << batch.count << " realizations of " << batch.variable_names.size() << " variables to "
        << *o.out_path << '\n';
  return kOk;
}

void diagnose(std::ostream& err, const std::string& path, const std::string& text, const Error& e) {
  err << path;
  if (const auto* se = dynamic_cast<const SpecError*>(&e); se && !text.empty()) {
    std::optional<std::size_t> offset = se->offset();
    if (!offset) offset = locate_pointer(text, se->pointer());
    if (offset) {
      const auto [line, column] = line_column(text, *offset);
      err << ':' << line << ':' << column;
    }
  }
  err << ": error[" << to_string(e.code()) << "]: " << e.what() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Time-indexed composite causal variables: classify, unroll, audit and discover."};
  app.name("tempodag");
  app.require_subcommand(1, 1);
  Options o;

  auto with_spec = [&](CLI::App* sub) {
    sub->add_option("spec", o.path, "System spec file (JSON)")->required();
    sub->add_flag("--json", o.json, "Machine-readable output");
    return sub;
  };
  auto* validate = with_spec(app.add_subcommand("validate", "Check a spec file"));
  auto* classify = with_spec(app.add_subcommand("classify", "Derive the composite graph and classify acyclicity"));
  auto* unroll = with_spec(app.add_subcommand("unroll", "Split variables in time to remove cycles"));
  unroll->add_option("--var", o.var, "Variable to split");
  unroll->add_option("--at", o.at, "Split into times before and from this tick");
  unroll->add_flag("--auto", o.automatic, "Search for a minimal set of splits");
  unroll->add_option("--out", o.out_path, "Output spec path (default <input>.unrolled.json)");
  auto* faith = with_spec(app.add_subcommand("faithfulness", "Audit faithfulness against the exact oracle"));
  faith->add_option("--max-conditioning", o.max_conditioning, "Largest conditioning set to enumerate");
  auto* discover = with_spec(app.add_subcommand("discover", "PC skeleton, orientation, and time-order check"));
  discover->add_flag("--exact", o.exact, "Use the analytic independence oracle");
  discover->add_option("--samples", o.samples, "Use Fisher z tests on this many realizations");
  discover->add_option("--seed", o.seed, "Sampling seed");
  discover->add_option("--alpha", o.alpha, "Significance level");
  auto* simulate = with_spec(app.add_subcommand("simulate", "Sample composite variables to CSV"));
  simulate->add_option("--samples", o.samples, "Number of realizations")->required();
  simulate->add_option("--seed", o.seed, "Sampling seed");
  simulate->add_option("--out", o.out_path, "CSV output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalidInput;
  }

  const report::Style style{use_color(env, err)};
  std::string text;
  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (classify->parsed()) return cmd_classify(o, out, style);
    if (unroll->parsed()) return cmd_unroll(o, out, style);
    if (faith->parsed()) return cmd_faithfulness(o, out, style);
    if (discover->parsed()) return cmd_discover(o, out, style);
    if (simulate->parsed()) return cmd_simulate(o, out);
  } catch (const Error& e) {
    if (dynamic_cast<const SpecError*>(&e)) {
      try {
        text = read_file(o.path);
      } catch (const Error&) {
      }
    }
    diagnose(err, o.path, text, e);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << o.path << ": error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace tempodag::cli

#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "sparsebound/sparsebound.hpp"

namespace sparsebound::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string format = "csv";
  std::vector<std::string> schemes;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string norms;
  std::string t_grid;
  double gamma = 0.0;
  double epsilon = 0.1;
  bool no_timestamp = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<NormKind> parse_norms(const std::string& text, std::vector<NormKind> defaults) {
  if (text.empty()) return defaults;
  std::vector<NormKind> out;
  for (const auto& name : split_list(text)) out.push_back(NormKind::parse(name));
  if (out.empty()) throw UsageError("--norms is empty");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(v >= 0.0)) throw UsageError("--t-grid entry '" + item + "' is not a number >= 0");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> norm_names(const std::vector<NormKind>& norms) {
  std::vector<std::string> out;
  for (const auto& n : norms) out.push_back(n.name());
  return out;
}

const Scheme& only_scheme(const std::vector<Scheme>& schemes) {
  if (schemes.size() != 1) throw UsageError("exactly one --scheme is required");
  return schemes.front();
}

std::vector<Scheme> parse_schemes(const Options& o) {
  std::vector<Scheme> out;
  for (const auto& s : o.schemes) out.push_back(parse_scheme(s));
  return out;
}

void require_input(const Options& o) {
  if (o.input.empty()) throw UsageError("--input is required");
}

std::uint64_t resolve_seed(const Options& o, std::ostream& err) {
  if (o.seed_opt->count() > 0) return o.seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed: " << seed << '\n';
  return seed;
}

std::size_t trials_or(const Options& o, std::size_t fallback) {
  if (o.trials_opt->count() == 0) return fallback;
  if (o.trials == 0) throw UsageError("--trials must be >= 1");
  return o.trials;
}

Report make_report(const std::string& command, const Options& o, std::uint64_t seed) {
  Report r;
  r.command = command;
  r.seed = seed;
  if (!o.no_timestamp) r.timestamp = utc_timestamp();
  r.config["input"] = o.input;
  return r;
}

void emit(const Report& r, const Options& o, std::ostream& out) {
  const ReportFormat format = parse_report_format(o.format);
  if (o.output.empty()) {
    write_report(r, out, format);
  } else {
    write_report(r, std::filesystem::path(o.output), format);
  }
}

std::string format_terms(const BoundReport& b) {
  std::string out;
  for (const auto& [name, v] : b.terms) {
    if (!out.empty()) out += ';';
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out += name + "=" + std::string(buf, res.ptr);
  }
  return out;
}

int cmd_norms(const Options& o, std::ostream& out) {
  require_input(o);
  const auto a = read_matrix(std::filesystem::path(o.input));
  const auto norms = parse_norms(o.norms, {NormTag::InfTo1, NormTag::InfTo2, NormTag::Spectral,
                                           NormTag::Frobenius, NormTag::ColNorm, NormTag::TwoToInf});
  Report r = make_report("norms", o, 0);
  r.config["rows"] = a.rows();
  r.config["cols"] = a.cols();
  r.config["norms"] = norm_names(norms);
  r.table.columns = {"norm", "value"};
  for (const auto& n : norms) r.table.add_row({n.name(), evaluate_norm(n, a)});
  emit(r, o, out);
  return 0;
}

int cmd_budget(const Options& o, std::ostream& out, std::ostream& err) {
  const auto a = read_matrix(std::filesystem::path(o.input));
  const auto norms = parse_norms(o.norms, {NormTag::InfTo1, NormTag::InfTo2});
  Report r = make_report("bounds", o, 0);
  r.config["gamma"] = o.gamma;
  r.config["norms"] = norm_names(norms);
  r.table.columns = {"norm", "gamma", "p", "grid_index", "relative_bound",
                     "reference_p", "expected_nnz", "regime_warning"};
  for (const auto& n : norms) {
    const auto b = sparsity_budget(a, o.gamma, n.tag());
    if (b.regime_warning) err << "warning: the target has entries <= 0; the p ~ 1/(1 + n gamma^2) reference assumes positive entries\n";
    r.table.add_row({n.name(), b.gamma, b.p, static_cast<std::int64_t>(b.grid_index), b.relative_bound,
                     b.reference_p, b.expected_nnz, b.regime_warning});
  }
  emit(r, o, out);
  return 0;
}

int cmd_bounds(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o);
  if (o.gamma_opt->count() > 0) return cmd_budget(o, out, err);
  const auto schemes = parse_schemes(o);
  const auto& scheme = only_scheme(schemes);
  const auto a = read_matrix(std::filesystem::path(o.input));
  const auto bs = sparsebound::bind(scheme, a);
  const auto mp = moments(bs);
  const auto norms = parse_norms(o.norms, {NormTag::InfTo1, NormTag::InfTo2, NormTag::Spectral});

  Report r = make_report("bounds", o, 0);
  r.config["scheme"] = format_scheme(bs.scheme());
  r.config["norms"] = norm_names(norms);
  r.table.columns = {"norm", "value", "constant_mode", "scale", "terms"};
  r.details = nlohmann::ordered_json::array();
  for (const auto& n : norms) {
    BoundReport b;
    switch (n.tag()) {
      case NormTag::InfTo1:
        b = inf1_bound(mp);
        break;
      case NormTag::InfTo2:
        b = inf2_bound(mp);
        break;
      case NormTag::Spectral:
        b = spectral_bound(mp);
        break;
      default:
        throw UsageError("no error bound for norm '" + n.name() + "'");
    }
    r.table.add_row({b.norm.name(), b.value, to_string(b.constant_mode), b.scale, format_terms(b)});
    r.details.push_back(to_json(b));
  }
  emit(r, o, out);
  return 0;
}

int cmd_sparsify(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o);
  const auto schemes = parse_schemes(o);
  const auto a = read_matrix(std::filesystem::path(o.input));
  const auto bs = sparsebound::bind(only_scheme(schemes), a);
  const std::uint64_t seed = resolve_seed(o, err);
  const auto x = sample(bs, seed, 0);
  std::size_t nnz = 0;
  for (double v : x.entries())
    if (v != 0.0) ++nnz;
  std::ostream& summary = o.output.empty() ? err : out;
  if (o.output.empty()) {
    write_matrix(x, out, MatrixFormat::Coordinate);
  } else {
    write_matrix(x, std::filesystem::path(o.output), MatrixFormat::Coordinate);
  }
  summary << "nnz: " << nnz << " (expected " << expected_nnz(bs) << " of " << x.size() << ")\n";
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o);
  const auto schemes = parse_schemes(o);
  ExperimentConfig cfg;
  cfg.source.matrix = read_matrix(std::filesystem::path(o.input));
  cfg.scheme = only_scheme(schemes);
  cfg.trials = trials_or(o, 1000);
  cfg.seed = resolve_seed(o, err);
  cfg.norms = parse_norms(o.norms, {NormTag::InfTo1, NormTag::InfTo2, NormTag::Spectral});
  const auto grid = parse_grid(o.t_grid);

  const auto bs = sparsebound::bind(cfg.scheme, *cfg.source.matrix);
  const auto mp = moments(bs);
  const auto stats = run_trials(cfg);
  const auto tails = verify_tails(cfg, grid);

  Report r = make_report("verify", o, cfg.seed);
  r.config["scheme"] = format_scheme(bs.scheme());
  r.config["trials"] = cfg.trials;
  r.config["norms"] = norm_names(cfg.norms);
  r.config["t_grid"] = grid;
  r.config["sup_bound"] = tails.sup_bound;
  r.table.columns = {"norm", "mean", "std_err", "bound", "constant_mode", "bound_ok",
                     "t", "empirical", "tail_bound", "slack", "violation"};
  bool failed = false;
  for (std::size_t i = 0; i < cfg.norms.size(); ++i) {
    const auto tag = cfg.norms[i].tag();
    const BoundReport b = tag == NormTag::InfTo1   ? inf1_bound(mp)
                          : tag == NormTag::InfTo2 ? inf2_bound(mp)
                                                   : spectral_bound(mp);
    const bool explicit_bound = b.constant_mode == ConstantMode::Explicit;
    const bool bound_ok = !explicit_bound || stats[i].mean <= b.value + 3.0 * stats[i].std_err;
    failed = failed || !bound_ok;
    for (const auto& row : tails.rows) {
      if (row.norm != cfg.norms[i]) continue;
      failed = failed || row.violation;
      r.table.add_row({cfg.norms[i].name(), stats[i].mean, stats[i].std_err, b.value,
                       to_string(b.constant_mode), bound_ok, row.t, row.empirical, row.bound,
                       row.slack, row.violation});
    }
  }
  emit(r, o, out);
  if (failed) {
    err << "verify: violated bound detected\n";
    return 2;
  }
  return 0;
}

int cmd_graph_cut(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o);
  const auto schemes = parse_schemes(o);
  const auto g = read_edge_list(std::filesystem::path(o.input));
  const std::size_t trials = trials_or(o, 100);
  const std::uint64_t seed = resolve_seed(o, err);
  const auto& scheme = only_scheme(schemes);
  const auto mc = max_cut_brute(g);
  if (mc.negative_weights) err << "warning: negative edge weights; max cut and cut-norm need not agree\n";
  const auto rep = cut_preservation(g, scheme, trials, seed, o.epsilon);

  Report r = make_report("graph-cut", o, seed);
  r.config["scheme"] = o.schemes.front();
  r.config["trials"] = trials;
  r.config["epsilon"] = o.epsilon;
  r.config["vertices"] = g.vertices();
  r.config["max_cut"] = mc.cost;
  r.config["within_epsilon"] = rep.within_epsilon;
  r.table.columns = {"trial", "max_relative_deviation", "max_abs_deviation", "cut_norm", "inf_to_1",
                     "sandwich_ok"};
  for (std::size_t t = 0; t < rep.trials.size(); ++t) {
    const auto& row = rep.trials[t];
    r.table.add_row({static_cast<std::int64_t>(t), row.max_relative_deviation, row.max_abs_deviation,
                     row.cut_norm, row.inf1, row.sandwich_ok});
  }
  emit(r, o, out);
  return 0;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  require_input(o);
  const auto schemes = parse_schemes(o);
  if (schemes.empty()) throw UsageError("at least one --scheme is required");
  const auto a = read_matrix(std::filesystem::path(o.input));
  const std::size_t trials = trials_or(o, 1000);
  const std::uint64_t seed = resolve_seed(o, err);
  const auto rows = scheme_comparison(a, schemes, trials, seed);

  Report r = make_report("compare", o, seed);
  r.config["schemes"] = o.schemes;
  r.config["trials"] = trials;
  r.table.columns = {"scheme",      "bound_sans_c", "closed_form", "closed_form_value",
                     "mean_error",  "std_err",      "expected_nnz", "sup_bound",
                     "tail_empirical", "tail_bound", "tail_violation"};
  for (const auto& row : rows) {
    r.table.add_row({row.scheme, row.bound_sans_c,
                     row.closed_form ? row.closed_form->label : std::string(),
                     row.closed_form ? row.closed_form->value : std::nan(""), row.mean_error,
                     row.std_err, row.expected_nnz, row.sup_bound, row.tail_empirical,
                     row.tail_bound, row.tail_violation});
  }
  emit(r, o, out);
  return 0;
}

void add_common(CLI::App* sub, Options& o, bool random) {
  sub->add_option("--input,-i", o.input, "Input file");
  sub->add_option("--output,-o", o.output, "Output file (default: stdout)");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from reports");
  if (random) {
    o.seed_opt = sub->add_option("--seed", o.seed, "RNG seed (default: drawn from the OS and printed)");
    o.trials_opt = sub->add_option("--trials", o.trials, "Monte Carlo trials");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized matrix sparsification: exact norms, error bounds and Monte Carlo checks",
               "sparsebound"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1, 1);

  // Each subcommand gets its own options so that seed/trials presence is
  // tracked per command.
  Options o_norms, o_bounds, o_sparsify, o_verify, o_graph, o_compare;

  auto* norms = app.add_subcommand("norms", "Exact norms of a MatrixMarket matrix");
  add_common(norms, o_norms, false);
  norms->add_option("--norms", o_norms.norms, "Comma-separated norms");

  auto* bounds = app.add_subcommand("bounds", "Error bounds of a scheme for a matrix");
  add_common(bounds, o_bounds, false);
  bounds->add_option("--scheme", o_bounds.schemes, "Scheme, kind:key=val,...");
  bounds->add_option("--norms", o_bounds.norms, "inf_to_1, inf_to_2, spectral");
  o_bounds.gamma_opt = bounds->add_option("--gamma", o_bounds.gamma,
                                          "Report the smallest Bernoulli p meeting this relative error");

  auto* sparsify = app.add_subcommand("sparsify", "Draw one approximant X");
  add_common(sparsify, o_sparsify, true);
  sparsify->add_option("--scheme", o_sparsify.schemes, "Scheme, kind:key=val,...");

  auto* verify = app.add_subcommand("verify", "Monte Carlo check of bounds and tail bounds");
  add_common(verify, o_verify, true);
  verify->add_option("--scheme", o_verify.schemes, "Scheme, kind:key=val,...");
  verify->add_option("--norms", o_verify.norms, "inf_to_1, inf_to_2, spectral");
  verify->add_option("--t-grid", o_verify.t_grid, "Comma-separated deviations t (default: natural grid)");

  auto* graph = app.add_subcommand("graph-cut", "Cut preservation of a sparsified graph");
  add_common(graph, o_graph, true);
  graph->add_option("--scheme", o_graph.schemes, "Scheme, kind:key=val,...");
  graph->add_option("--epsilon", o_graph.epsilon, "Relative cut tolerance");

  auto* compare = app.add_subcommand("compare", "Spectral comparison of several schemes");
  add_common(compare, o_compare, true);
  compare->add_option("--scheme", o_compare.schemes, "Scheme (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*norms) return cmd_norms(o_norms, out);
    if (*bounds) return cmd_bounds(o_bounds, out, err);
    if (*sparsify) return cmd_sparsify(o_sparsify, out, err);
    if (*verify) return cmd_verify(o_verify, out, err);
    if (*graph) return cmd_graph_cut(o_graph, out, err);
    if (*compare) return cmd_compare(o_compare, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace sparsebound::cli

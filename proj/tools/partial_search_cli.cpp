// partial_search: command-line front end.
//
// Exit codes: 0 success, 1 domain or constraint error, 2 usage error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "output.hpp"
#include "partial_search/partial_search.hpp"

namespace ps = partial_search;
using ps::cli::Fixed;
using ps::cli::OutputRecord;
using ps::cli::Row;
using ps::cli::Value;

namespace {

struct Range {
  std::int64_t lo;
  std::int64_t hi;
};

/// "a..b" or a single integer.
Range parse_range(const std::string& text, const std::string& flag) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw CLI::ValidationError(flag, "expected an integer or a..b, got '" + text + "'");
    }
    return static_cast<std::int64_t>(v);
  };
  const auto dots = text.find("..");
  Range r{};
  if (dots == std::string::npos) {
    r.lo = r.hi = to_int(text);
  } else {
    r.lo = to_int(text.substr(0, dots));
    r.hi = to_int(text.substr(dots + 2));
  }
  if (r.hi < r.lo) throw CLI::ValidationError(flag, "empty range '" + text + "'");
  return r;
}

Value opt(const std::optional<std::uint64_t>& v) {
  if (v) return *v;
  return std::monostate{};
}

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

struct Globals {
  std::string format = "csv";
  std::string out;
  int workers = 0;
};

// ---------------------------------------------------------------------------

OutputRecord cmd_angles(int n, int m) {
  const ps::SearchSpace space(n, m);
  const ps::Angles a = space.angles();
  OutputRecord rec{"angles", {{"n", n}, {"m", m}}, {}};
  rec.rows.push_back({{"n", n},
                      {"m", m},
                      {"N", space.database_size()},
                      {"b", space.block_size()},
                      {"K", space.block_count()},
                      {"theta1", a.theta1},
                      {"theta2", a.theta2},
                      {"gamma", a.gamma},
                      {"sin_theta1", std::sqrt(std::ldexp(1.0, -n))},
                      {"sin_theta2", std::sqrt(std::ldexp(1.0, -m))},
                      {"sin_gamma", std::sqrt(std::ldexp(1.0, m - n))}});
  return rec;
}

OutputRecord cmd_simulate(int n, int m, const std::string& seq_text) {
  const ps::SearchSpace space(n, m);
  const ps::OperatorSequence seq = ps::OperatorSequence::parse_tokens(seq_text);
  const ps::State3 s = ps::apply_sequence(space, seq);
  const double block = ps::block_probability_of(s);
  OutputRecord rec{"simulate", {{"n", n}, {"m", m}, {"seq", seq_text}}, {}};
  rec.rows.push_back({{"n", n},
                      {"m", m},
                      {"sequence", seq.to_tokens()},
                      {"operator", seq.to_product(n, m)},
                      {"k_tot", seq.total_queries()},
                      {"block_prob", block},
                      {"target_prob", ps::target_probability_of(s)},
                      {"amp_t", s.amp_t},
                      {"amp_bt", s.amp_bt},
                      {"amp_bbar", s.amp_bbar},
                      {"expected_iterations",
                       block > 0.0 ? Value(static_cast<double>(seq.total_queries()) / block)
                                   : Value(std::monostate{})}});
  return rec;
}

OutputRecord cmd_enumerate(int n, int m, const Range& k, bool all_ties, int workers) {
  const ps::SearchSpace space(n, m);
  if (k.lo < 1) throw ps::ParameterError("k_tot must be at least 1");
  OutputRecord rec{"enumerate",
                   {{"n", n}, {"m", m}, {"ktot_lo", k.lo}, {"ktot_hi", k.hi}, {"all_ties", all_ties}},
                   {}};
  std::vector<ps::EnumerationResult> results;
  for (std::int64_t kt = k.lo; kt <= k.hi; ++kt) {
    results.push_back(ps::enumerate_max_probability(space, static_cast<int>(kt), workers));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].expected_iterations < results[best].expected_iterations) best = i;
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ps::EnumerationResult& r = results[i];
    const std::size_t listed = all_ties ? r.optimal_sequences.size() : 1;
    for (std::size_t j = 0; j < listed; ++j) {
      const ps::OperatorSequence& seq = r.optimal_sequences[j];
      rec.rows.push_back({{"n", n},
                          {"m", m},
                          {"k_tot", r.k_tot},
                          {"rank", u64(static_cast<int>(j))},
                          {"pr_max", r.pr_max},
                          {"expected_iterations", r.expected_iterations},
                          {"tie_count", r.tie_count},
                          {"sequence", seq.to_tokens()},
                          {"operator", seq.to_product(n, m)},
                          {"is_grk", ps::is_grk_form(seq)},
                          {"budget_min", i == best}});
    }
  }
  return rec;
}

OutputRecord cmd_tables(int n, const std::string& which, std::vector<int> m_values, const Range& k,
                        int workers) {
  if (m_values.empty()) {
    for (int m = 2; m <= std::min(7, n - 1); ++m) m_values.push_back(m);
  }
  if (k.lo < 1) throw ps::ParameterError("k_tot must be at least 1");
  std::vector<int> k_values;
  for (std::int64_t kt = k.lo; kt <= k.hi; ++kt) k_values.push_back(static_cast<int>(kt));
  const auto rows = ps::table_sweep(n, m_values, k_values, workers);
  OutputRecord rec{"tables", {{"n", n}, {"which", which}, {"ktot_lo", k.lo}, {"ktot_hi", k.hi}}, {}};
  for (const ps::TableRow& r : rows) {
    Row row{{"n", r.n},
            {"m", r.m},
            {"k_tot", r.k_tot},
            {"operator", r.product},
            {"sequence", r.sequence.to_tokens()}};
    if (which == "pr") {
      row.emplace_back("pr_percent", Fixed{100.0 * r.pr_max, 4});
    } else {
      row.emplace_back("expected_iterations", Fixed{r.expected_iterations, 4});
      row.emplace_back("column_min", r.is_column_min);
    }
    row.emplace_back("is_grk", r.is_grk);
    row.emplace_back("tie_count", r.tie_count);
    rec.rows.push_back(std::move(row));
  }
  return rec;
}

OutputRecord bounds_summary(int n, int m) {
  const ps::SearchSpace space(n, m);
  const ps::BoundConstants& c = ps::bound_constants();
  const ps::ExpectedBoundBranches br = ps::min_expected_branches(space);
  Row row{{"n", n},
          {"m", m},
          {"N", space.database_size()},
          {"b", space.block_size()},
          {"K", space.block_count()},
          {"gamma", space.angles().gamma},
          {"epsilon", c.epsilon},
          {"lemma_ktot", ps::lemma_optimal_ktot(space)},
          {"theorem2_bound", ps::min_expected_bound(space)},
          {"theorem2_interior", br.interior},
          {"theorem2_single", br.single},
          {"theorem2_branch", std::string(m <= n / 2 ? "interior" : "single")},
          {"grk_unit_reference", ps::grk_unit_probability_queries(space)}};
  if (space.block_count() >= 3) {
    const ps::GrkParameters p = ps::grk_optimal_parameters(space);
    row.emplace_back("grk_eta", p.eta_K);
    row.emplace_back("grk_alpha", p.alpha_K);
    row.emplace_back("grk_k1", p.k1);
    row.emplace_back("grk_k2", p.k2);
    row.emplace_back("grk_pr",
                     ps::block_success_probability(space, ps::grk_sequence(p.k1, p.k2)));
  } else {
    for (const char* key : {"grk_eta", "grk_alpha", "grk_k1", "grk_k2", "grk_pr"})
      row.emplace_back(key, std::monostate{});
  }
  const std::uint64_t N = space.database_size();
  if (N >= 8) {
    const ps::GroverOptimum g = ps::grover_kmin(N);
    row.emplace_back("grover_kmin", g.k_min);
    row.emplace_back("grover_pr", g.pr);
    row.emplace_back("grover_emin", g.e_min);
  } else {
    const ps::GroverIntegerOptimum g = ps::grover_integer_optimum(N);
    row.emplace_back("grover_kmin", static_cast<double>(g.k));
    row.emplace_back("grover_pr", g.pr);
    row.emplace_back("grover_emin", g.e_min);
  }
  return {"bounds", {{"n", n}, {"m", m}, {"kind", std::string("summary")}}, {row}};
}

OutputRecord bounds_fig3(int n, int m, const Range& k, int workers) {
  const ps::SearchSpace space(n, m);
  if (k.lo < 1) throw ps::ParameterError("k_tot must be at least 1");
  std::vector<std::uint64_t> ks;
  for (std::int64_t kt = k.lo; kt <= k.hi; ++kt) ks.push_back(static_cast<std::uint64_t>(kt));
  OutputRecord rec{"bounds",
                   {{"n", n}, {"m", m}, {"kind", std::string("fig3")}, {"ktot_lo", k.lo}, {"ktot_hi", k.hi}},
                   {}};
  for (const ps::Figure3Record& r : ps::figure3_sweep(space, ks, workers)) {
    rec.rows.push_back({{"k_tot", r.k_tot},
                        {"alpha", r.alpha},
                        {"pr_numeric", r.pr_numeric},
                        {"k1_numeric", r.k1_numeric},
                        {"k2_numeric", r.k2_numeric},
                        {"bound", r.bound},
                        {"k2_analytic", r.k2_analytic},
                        {"pr_at_k2_analytic", r.pr_at_k2_analytic}});
  }
  return rec;
}

OutputRecord bounds_fig4(int n, int workers) {
  OutputRecord rec{"bounds", {{"n", n}, {"kind", std::string("fig4")}}, {}};
  for (const ps::Figure4Record& r : ps::figure4_sweep(n, workers)) {
    rec.rows.push_back({{"n", r.n},
                        {"m", r.m},
                        {"e_min", r.e_min},
                        {"k_tot", r.k_tot},
                        {"k1", r.k1},
                        {"k2", r.k2},
                        {"bound", r.bound},
                        {"bound_interior", r.bound_interior},
                        {"bound_single", r.bound_single},
                        {"grk_unit_reference", r.grk_unit_reference}});
  }
  return rec;
}

OutputRecord bounds_constants() {
  const ps::BoundConstants& c = ps::bound_constants();
  const ps::ParallelConstants& p = ps::parallel_constants();
  const std::vector<std::pair<std::string, double>> values{
      {"f_argmin", c.f_argmin},
      {"f_min", c.f_min},
      {"epsilon", c.epsilon},
      {"c_grk", c.c_grk},
      {"alpha0_lemma", c.alpha0_lemma},
      {"varepsilon_lemma", c.varepsilon_lemma},
      {"grover_kmin_coeff", c.grover_kmin_coeff},
      {"grover_pr_at_kmin", c.grover_pr_at_kmin},
      {"grover_emin_coeff", c.grover_emin_coeff},
      {"theorem2_c0", c.theorem2_c0},
      {"theorem2_c1", c.theorem2_c1},
      {"crossover", c.crossover},
      {"large_l_root", p.large_l_root},
      {"large_l_kmin_coeff", p.large_l_kmin_coeff},
      {"large_l_emin_coeff", p.large_l_emin_coeff},
      {"hybrid_l2_floor", p.hybrid_l2_floor},
      {"grk_l2_alpha0", p.grk_l2_alpha0},
      {"grk_l2_coeff", p.grk_l2_coeff},
      {"grk_l2_correction", p.grk_l2_correction}};
  OutputRecord rec{"bounds", {{"kind", std::string("constants")}}, {}};
  for (const auto& [name, v] : values) rec.rows.push_back({{"name", name}, {"value", v}});
  return rec;
}

Row scheme_row(int n, ps::Scheme kind, std::uint64_t l, bool allow_k2,
               const std::optional<ps::SchemeResult>& r, const std::string& reason) {
  const std::uint64_t N = std::uint64_t{1} << n;
  Value asymptotic = std::monostate{};
  const double ratio = static_cast<double>(N) / static_cast<double>(l);
  switch (kind) {
    case ps::Scheme::Inner:
      asymptotic = ps::bound_constants().grover_emin_coeff * std::sqrt(ratio);
      break;
    case ps::Scheme::Outer:
      asymptotic = ps::outer_large_l_asymptotic(N, l);
      break;
    case ps::Scheme::GrkBased:
      if (l == 2) asymptotic = ps::grk_parallel_l2_asymptotic(N);
      break;
    case ps::Scheme::Hybrid:
      if (l == u64(n) && !allow_k2) asymptotic = ps::hybrid_large_l_asymptotic(n).e_min;
      if (l == 2 && !allow_k2) asymptotic = ps::hybrid_l2_lower_bound(N);
      break;
  }
  Row row{{"scheme", ps::scheme_name(kind)},
          {"n", n},
          {"l", l},
          {"allow_k2", allow_k2},
          {"admissible", r.has_value()}};
  if (r) {
    row.emplace_back("queries", r->queries);
    row.emplace_back("k1", opt(r->k1));
    row.emplace_back("k2", opt(r->k2));
    row.emplace_back("e_min", r->e_min);
    row.emplace_back("pr_at_opt", r->pr_at_opt);
  } else {
    for (const char* key : {"queries", "k1", "k2", "e_min", "pr_at_opt"})
      row.emplace_back(key, std::monostate{});
  }
  row.emplace_back("asymptotic", asymptotic);
  row.emplace_back("reason", reason);
  return row;
}

OutputRecord cmd_parallel(const std::string& scheme, const std::vector<int>& ns,
                          std::vector<std::uint64_t> ls, bool no_k2, int workers) {
  OutputRecord rec{"parallel", {{"scheme", scheme}, {"no_k2", no_k2}}, {}};
  std::string n_list, l_list;
  for (int n : ns) n_list += (n_list.empty() ? "" : ";") + std::to_string(n);
  for (std::uint64_t l : ls) l_list += (l_list.empty() ? "" : ";") + std::to_string(l);
  rec.parameters.emplace_back("n", n_list);
  rec.parameters.emplace_back("l", l_list);
  const bool explicit_l = !ls.empty();

  for (int n : ns) {
    if (n < 1 || n > ps::kMaxQubits) throw ps::ParameterError("n out of range");
    const std::uint64_t N = std::uint64_t{1} << n;
    std::vector<std::uint64_t> l_values = ls;
    if (!explicit_l) {
      for (int l = 1; l <= n; ++l) l_values.push_back(u64(l));
    }
    if (scheme == "compare") {
      for (const ps::SchemeEntry& e : ps::compare_schemes(n, l_values, workers)) {
        if (no_k2 && e.kind == ps::Scheme::Hybrid && e.allow_k2) continue;
        rec.rows.push_back(scheme_row(n, e.kind, e.l, e.allow_k2, e.result, e.reason));
      }
      continue;
    }
    for (std::uint64_t l : l_values) {
      if (scheme == "inner") {
        const bool ok = l >= 1 && std::has_single_bit(l) && l <= N;
        if (!ok && explicit_l) ps::inner_min(N, l);  // throws with the constraint message
        rec.rows.push_back(scheme_row(n, ps::Scheme::Inner, l, false,
                                      ok ? std::optional(ps::inner_min(N, l)) : std::nullopt,
                                      ok ? "" : "l is not a power of two"));
      } else if (scheme == "outer") {
        rec.rows.push_back(scheme_row(n, ps::Scheme::Outer, l, false, ps::outer_min(N, l), ""));
      } else {
        const bool ok = l >= 1 && u64(n) % l == 0;
        if (!ok && explicit_l) ps::parallel_space(n, l);  // throws
        const ps::Scheme kind = scheme == "grk" ? ps::Scheme::GrkBased : ps::Scheme::Hybrid;
        if (!ok) {
          rec.rows.push_back(scheme_row(n, kind, l, kind == ps::Scheme::GrkBased, std::nullopt,
                                        "l does not divide n"));
          continue;
        }
        const ps::SearchSpace space = ps::parallel_space(n, l);
        if (kind == ps::Scheme::GrkBased) {
          rec.rows.push_back(
              scheme_row(n, kind, l, true, ps::grk_parallel_min(space, l, workers), ""));
        } else {
          rec.rows.push_back(
              scheme_row(n, kind, l, false, ps::hybrid_min(space, l, false, workers), ""));
          if (!no_k2) {
            rec.rows.push_back(
                scheme_row(n, kind, l, true, ps::hybrid_min(space, l, true, workers), ""));
          }
        }
      }
    }
  }
  return rec;
}

OutputRecord report_record(const ps::statevec::VerificationReport& r) {
  OutputRecord rec{"verify",
                   {{"n", r.n},
                    {"m", r.m},
                    {"sequences", r.sequences},
                    {"tol", r.tolerance},
                    {"seed", r.seed}},
                   {}};
  rec.rows.push_back({{"n", r.n},
                      {"m", r.m},
                      {"seed", r.seed},
                      {"sequences", r.sequences},
                      {"tolerance", r.tolerance},
                      {"max_deviation", r.max_deviation},
                      {"max_target_variation", r.max_target_variation},
                      {"worst_sequence", r.worst_sequence.to_tokens()},
                      {"worst_target", r.worst_target},
                      {"passed", r.passed}});
  return rec;
}

void emit(const Globals& g, const OutputRecord& rec) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!g.out.empty()) {
    file.open(g.out);
    if (!file) throw ps::ResourceError("cannot open output file '" + g.out + "'");
    os = &file;
  }
  if (g.format == "json") {
    ps::cli::write_json(*os, rec);
  } else {
    ps::cli::write_csv(*os, rec);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum partial search: exact subspace dynamics, sequence search, bounds and parallel schemes"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--workers", g.workers, "Worker threads (0 = available parallelism)")
      ->envname("PARTIAL_SEARCH_WORKERS")
      ->check(CLI::NonNegativeNumber);

  int n = 0, m = 0;

  auto* angles = app.add_subcommand("angles", "Angles theta1, theta2, gamma of a search space");
  angles->add_option("--n", n, "Address qubits")->required();
  angles->add_option("--m", m, "Qubits inside a block")->required();

  std::string seq;
  auto* simulate = app.add_subcommand("simulate", "Apply an operator sequence in the 3D subspace");
  simulate->add_option("--n", n)->required();
  simulate->add_option("--m", m)->required();
  simulate->add_option("--seq", seq, "Application-ordered tokens, e.g. l:1,g:1")->required();

  std::string ktot;
  bool all_ties = false;
  auto* enumerate = app.add_subcommand("enumerate", "Exhaustive search over all 2^k sequences");
  enumerate->add_option("--n", n)->required();
  enumerate->add_option("--m", m)->required();
  enumerate->add_option("--ktot", ktot, "k_tot or a..b")->required();
  enumerate->add_flag("--all-ties", all_ties, "List every co-optimal sequence");

  std::string which;
  std::vector<int> table_m;
  std::string table_k = "2..11";
  auto* tables = app.add_subcommand("tables", "Optimal sequences for a grid of m and k_tot");
  tables->add_option("--n", n)->required();
  tables->add_option("--which", which, "pr: success probability, e: expected iterations")
      ->required()
      ->check(CLI::IsMember({"pr", "e"}));
  tables->add_option("--m", table_m, "Block sizes (default 2..min(7, n-1))")->delimiter(',');
  tables->add_option("--ktot-range", table_k, "k_tot range a..b")->capture_default_str();

  std::string ktot_range, kind = "auto";
  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds and figure data");
  bounds->add_option("--n", n)->required();
  bounds->add_option("--m", m);
  bounds->add_option("--ktot-range", ktot_range, "k_tot range a..b for the probability sweep");
  bounds->add_option("--kind", kind, "summary, fig3, fig4 or constants")
      ->check(CLI::IsMember({"auto", "summary", "fig3", "fig4", "constants"}))
      ->capture_default_str();

  std::string scheme;
  std::vector<int> ns;
  std::vector<std::uint64_t> ls;
  bool no_k2 = false;
  auto* parallel = app.add_subcommand("parallel", "Parallel search schemes");
  parallel->add_option("--scheme", scheme)
      ->required()
      ->check(CLI::IsMember({"inner", "outer", "grk", "hybrid", "compare"}));
  parallel->add_option("--n", ns, "Address qubits (comma separated)")->required()->delimiter(',');
  parallel->add_option("--l", ls, "QPU counts (comma separated, default 1..n)")->delimiter(',');
  parallel->add_flag("--no-k2", no_k2, "Hybrid: only the k2 = 0 family");

  int sequences = 0, max_k = 0;
  double tol = 0.0;
  std::uint64_t seed = ps::statevec::kDefaultSeed;
  auto* verify = app.add_subcommand("verify", "Check the 3D reduction against full simulation");
  verify->add_option("--n", n)->required();
  verify->add_option("--m", m)->required();
  verify->add_option("--sequences", sequences)->required()->check(CLI::PositiveNumber);
  verify->add_option("--max-k", max_k)->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--tol", tol)->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (angles->parsed()) {
      emit(g, cmd_angles(n, m));
    } else if (simulate->parsed()) {
      emit(g, cmd_simulate(n, m, seq));
    } else if (enumerate->parsed()) {
      emit(g, cmd_enumerate(n, m, parse_range(ktot, "--ktot"), all_ties, g.workers));
    } else if (tables->parsed()) {
      emit(g, cmd_tables(n, which, table_m, parse_range(table_k, "--ktot-range"), g.workers));
    } else if (bounds->parsed()) {
      if (kind == "auto") kind = ktot_range.empty() ? "summary" : "fig3";
      if ((kind == "summary" || kind == "fig3") && bounds->count("--m") == 0) {
        throw CLI::RequiredError("--m");
      }
      if (kind == "fig3" && ktot_range.empty()) throw CLI::RequiredError("--ktot-range");
      if (kind == "summary") emit(g, bounds_summary(n, m));
      if (kind == "fig3") emit(g, bounds_fig3(n, m, parse_range(ktot_range, "--ktot-range"), g.workers));
      if (kind == "fig4") emit(g, bounds_fig4(n, g.workers));
      if (kind == "constants") emit(g, bounds_constants());
    } else if (parallel->parsed()) {
      emit(g, cmd_parallel(scheme, ns, ls, no_k2, g.workers));
    } else if (verify->parsed()) {
      try {
        emit(g, report_record(ps::statevec::verify_subspace(n, m, sequences, max_k, tol, seed)));
      } catch (const ps::statevec::VerificationError& e) {
        emit(g, report_record(e.report()));
        std::cerr << "error: " << e.what() << '\n';
        return 1;
      }
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

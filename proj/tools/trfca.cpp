// trfca: transfer systems via formal concept analysis.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "trfca.hpp"

namespace {

using namespace trfca;
using Clock = std::chrono::steady_clock;

enum Exit : int { kOk = 0, kParse = 1, kCap = 2, kOverflow = 3, kIo = 4, kVerifyFailed = 5 };

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string grouped(std::uint64_t v) {
  std::string s = std::to_string(v), out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i && (s.size() - i) % 3 == 0) out += ',';
    out += s[i];
  }
  return out;
}

std::string show(const ExactRational& r) { return r.to_string() + " = " + r.to_decimal(12); }

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << data)) throw IoError("cannot write '" + path + "'");
}

struct SourceOpts {
  std::string group, lattice, input;
  std::size_t group_cap = kDefaultGroupCap;
  std::size_t cols = 0;
};

void add_source(CLI::App* app, SourceOpts& s, bool allow_input = true) {
  auto* g = app->add_option("--group", s.group, "group spec, e.g. S:4, cyclic:8, perm:(012);(01)");
  auto* l = app->add_option("--lattice", s.lattice, "lattice spec, e.g. chain:3, grid:2,2, subspaces:2,2");
  g->excludes(l);
  if (allow_input) {
    auto* i = app->add_option("--input", s.input, "FIMI context file, '-' for stdin");
    i->excludes(g)->excludes(l);
    app->add_option("--cols", s.cols, "attribute count of a FIMI input (default: largest index + 1)");
  }
  app->add_option("--group-cap", s.group_cap, "largest group order accepted")->capture_default_str();
}

bool has_lattice_source(const SourceOpts& s) { return !s.group.empty() || !s.lattice.empty(); }

GLattice load_lattice(const SourceOpts& s) {
  if (!s.group.empty()) return subgroup_lattice(parse_group_spec(s.group, s.group_cap), s.group_cap);
  if (!s.lattice.empty()) return parse_lattice_spec(s.lattice);
  throw ParseError("one of --group or --lattice is required");
}

FormalContext load_context(const SourceOpts& s) {
  if (!s.input.empty()) return import_fimi(read_input(s.input), s.cols);
  if (!has_lattice_source(s)) throw ParseError("one of --group, --lattice or --input is required");
  return build_reduced_context(load_lattice(s));
}

std::string label_set(const Bitset& b, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  b.for_each([&](std::size_t i) {
    out += (first ? "" : ", ") + (i < labels.size() ? labels[i] : std::to_string(i));
    first = false;
  });
  return out + "}";
}

std::string relation_text(const GRelation& r) {
  std::string out;
  for (auto p : r.nontrivial_pairs()) out += (out.empty() ? "" : " ") + pair_label(*r.lattice, p);
  return out.empty() ? "(identity)" : out;
}

// ---- context / export -------------------------------------------------------

struct ExportOpts {
  SourceOpts src;
  std::string out, format = "fimi";
  bool labels = false, sort = false;
};

int run_export(const ExportOpts& o) {
  const auto t0 = Clock::now();
  FormalContext ctx = load_context(o.src);
  if (o.sort) ctx = sort_rows_for_cbo(ctx);
  std::cerr << "context " << ctx.rows() << "x" << ctx.cols() << ", " << ctx.ones() << " ones, built in "
            << ms_since(t0) << " ms\n";
  if (o.labels) {
    std::ostringstream os;
    for (std::size_t r = 0; r < ctx.rows(); ++r) {
      for (std::size_t c = 0; c < ctx.cols(); ++c) os << (ctx.has(r, c) ? '1' : '0');
      os << "  " << ctx.object_labels[r] << '\n';
    }
    write_output(o.out, os.str());
    return kOk;
  }
  if (o.format == "pbm") {
    write_output(o.out, export_pbm(ctx));
  } else {
    write_output(o.out, export_fimi(ctx));
  }
  return kOk;
}

// ---- count ------------------------------------------------------------------

struct CountOpts {
  SourceOpts src;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  std::optional<unsigned> depth;
  bool enumerate = false, json = false, no_sort = false;
  std::size_t limit = 1000;
};

int run_count(const CountOpts& o) {
  const auto t0 = Clock::now();
  FormalContext ctx = load_context(o.src);
  if (!o.no_sort) ctx = sort_rows_for_cbo(ctx);
  const double t_context = ms_since(t0);

  const auto t1 = Clock::now();
  std::uint64_t count = 0;
  if (o.enumerate) {
    const auto concepts = enumerate_concepts(ctx, o.limit);
    for (const auto& c : concepts)
      std::cout << label_set(c.extent, ctx.object_labels) << " | " << label_set(c.intent, ctx.attribute_labels) << '\n';
    count = concepts.size();
  } else {
    const unsigned depth = o.depth.value_or(static_cast<unsigned>(std::min<std::size_t>(7, ctx.rows() / 4)));
    count = count_concepts(ctx, CountOptions{o.threads, depth});
  }
  const double t_count = ms_since(t1);

  if (o.json) {
    nlohmann::json j;
    j["rows"] = ctx.rows();
    j["cols"] = ctx.cols();
    j["ones"] = ctx.ones();
    const bool nonempty = ctx.rows() && ctx.cols();
    j["density"] = nonempty ? density(ctx).to_string() : "";
    j["codensity"] = nonempty ? codensity(ctx).to_string() : "";
    j["count"] = count;
    j["t_context_ms"] = t_context;
    j["t_count_ms"] = t_count;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << count << " (" << grouped(count) << ")\n";
  }
  std::cerr << "context " << ctx.rows() << "x" << ctx.cols() << ": T1 = " << t_context << " ms, T2 = " << t_count
            << " ms\n";
  return kOk;
}

// ---- density ----------------------------------------------------------------

int run_density(const SourceOpts& s) {
  const FormalContext ctx = load_context(s);
  std::cout << "rows      " << ctx.rows() << "\ncols      " << ctx.cols() << "\nones      " << ctx.ones()
            << "\ndensity   " << show(density(ctx)) << "\ncodensity " << show(codensity(ctx)) << '\n';
  return kOk;
}

// ---- complexity / bounds -----------------------------------------------------

int run_complexity(const SourceOpts& s, std::uint64_t budget) {
  const FormalContext ctx = load_context(s);
  const auto r = contranomial_max_k(ctx, budget);
  std::cout << "complexity " << r.k << (r.exact ? "" : " (lower bound: search budget exhausted)") << '\n';
  std::cout << "nodes      " << r.nodes << '\n';
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const std::string rl = r.rows[i] < ctx.object_labels.size() ? ctx.object_labels[r.rows[i]] : std::to_string(r.rows[i]);
    const std::string cl =
        r.cols[i] < ctx.attribute_labels.size() ? ctx.attribute_labels[r.cols[i]] : std::to_string(r.cols[i]);
    std::cout << "  " << rl << " / " << cl << '\n';
  }
  return kOk;
}

int run_bounds(const SourceOpts& s, std::uint64_t budget, unsigned threads) {
  const FormalContext ctx = sort_rows_for_cbo(load_context(s));
  const auto count = count_concepts(ctx, CountOptions{threads, static_cast<unsigned>(std::min<std::size_t>(7, ctx.rows() / 4))});
  const auto cx = contranomial_max_k(ctx, budget);
  std::cout << "rows        " << ctx.rows() << "\ncols        " << ctx.cols() << "\nones        " << ctx.ones() << '\n';
  std::cout << "concepts    " << count << '\n';
  std::cout << "schuett     " << schuett_bound(BigInt(static_cast<unsigned long>(ctx.ones()))) << '\n';
  std::cout << "trivial     " << trivial_bound(ctx.rows(), ctx.cols()) << '\n';
  std::cout << "complexity  " << cx.k << (cx.exact ? "" : " (lower bound)") << '\n';
  if (cx.exact) std::cout << "ncfree      " << ncfree_bound(cx.k + 1, ctx.rows()) << '\n';
  return kOk;
}

// ---- oracle -----------------------------------------------------------------

struct OracleOpts {
  SourceOpts src;
  std::string mode;
  bool saturated = false;
  std::size_t cap = 20;
};

int run_oracle(const OracleOpts& o) {
  const GLattice L = load_lattice(o.src);
  if (o.mode == "count" || o.mode == "list") {
    const auto systems = o.saturated ? enumerate_saturated(L) : enumerate_transfer_systems(L, o.cap);
    if (o.mode == "list")
      for (const auto& t : systems) std::cout << relation_text(t) << '\n';
    std::cout << systems.size() << '\n';
    return kOk;
  }

  // verify
  bool all = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << '\n';
    all = all && ok;
  };
  const auto validation = validate(L);
  report("lattice axioms", validation.empty(), validation.empty() ? "" : validation.front());

  const auto reps = nontrivial_relation_orbits(L);
  const auto ctx = build_reduced_context(L);
  bool incidence_ok = true;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const auto fl = floor_closure(L, reps[r].x, reps[r].y);
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (fl.subset_of(rlp_transfer(L, reps[c].x, reps[c].y)) != ctx.has(r, c)) incidence_ok = false;
  }
  report("floor(x->y) in rlp(a->b) matches context incidence", incidence_ok);

  const auto systems = enumerate_transfer_systems(L, o.cap);
  const auto count = count_concepts(ctx);
  report("|Tr(L)| equals concept count", systems.size() == count,
         std::to_string(systems.size()) + " vs " + std::to_string(count));

  const auto iso = verify_canonical_isomorphism(L, o.cap);
  report("canonical isomorphism Tr(L) -> concepts", iso.empty(), iso.empty() ? "" : iso.front());

  const auto irr = irreducibles_of_family(systems);
  std::vector<GRelation> floors, rlps;
  for (auto p : reps) {
    floors.push_back(floor_closure(L, p.x, p.y));
    rlps.push_back(rlp_transfer(L, p.x, p.y));
  }
  auto same_set = [&](const std::vector<std::size_t>& idx, const std::vector<GRelation>& expect) {
    if (idx.size() != expect.size()) return false;
    for (auto i : idx)
      if (std::find(expect.begin(), expect.end(), systems[i]) == expect.end()) return false;
    return true;
  };
  report("J(Tr(L)) = floor closures", same_set(irr.joins, floors), std::to_string(irr.joins.size()) + " join-irreducibles");
  report("M(Tr(L)) = rlp systems", same_set(irr.meets, rlps), std::to_string(irr.meets.size()) + " meet-irreducibles");

  bool sat_ok = true;
  for (const auto& t : enumerate_saturated(L)) sat_ok = sat_ok && is_saturated(t) && is_transfer_system(t);
  report("saturated systems are saturated transfer systems", sat_ok);
  return all ? kOk : kVerifyFailed;
}

// ---- formula ----------------------------------------------------------------

std::vector<std::uint64_t> parse_list(const std::string& s) { return detail::parse_uint_list(s, ',', "parameter"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer systems on G-lattices via formal concept analysis"};
  app.require_subcommand(1);

  ExportOpts ctx_opts;
  auto* ctx_cmd = app.add_subcommand("context", "build the reduced context and write it as FIMI");
  add_source(ctx_cmd, ctx_opts.src);
  ctx_cmd->add_option("--out", ctx_opts.out, "output path (default stdout)");
  ctx_cmd->add_option("--format", ctx_opts.format, "fimi or pbm")->check(CLI::IsMember({"fimi", "pbm"}));
  ctx_cmd->add_flag("--labels", ctx_opts.labels, "print a labelled 0/1 table instead");
  ctx_cmd->add_flag("--sort", ctx_opts.sort, "apply the row-sort used before counting");

  ExportOpts exp_opts;
  auto* exp_cmd = app.add_subcommand("export", "write a context as FIMI or PBM");
  add_source(exp_cmd, exp_opts.src);
  exp_cmd->add_option("--out", exp_opts.out, "output path (default stdout)");
  exp_cmd->add_option("--format", exp_opts.format, "fimi or pbm")->check(CLI::IsMember({"fimi", "pbm"}))->required();

  CountOpts cnt;
  auto* cnt_cmd = app.add_subcommand("count", "count formal concepts (= transfer systems)");
  add_source(cnt_cmd, cnt.src);
  cnt_cmd->add_option("--threads", cnt.threads, "worker threads")->capture_default_str();
  cnt_cmd->add_option("--depth", cnt.depth, "split depth of the search tree (default min(7, rows/4))");
  cnt_cmd->add_flag("--enumerate", cnt.enumerate, "list concepts instead of only counting");
  cnt_cmd->add_option("--limit", cnt.limit, "maximum number of concepts to enumerate")->capture_default_str();
  cnt_cmd->add_flag("--json", cnt.json, "machine-readable report");
  cnt_cmd->add_flag("--no-sort", cnt.no_sort, "keep the row order of the context");

  SourceOpts den;
  auto* den_cmd = app.add_subcommand("density", "density and codensity of the reduced context");
  add_source(den_cmd, den);

  SourceOpts cpx;
  std::uint64_t budget = 50'000'000;
  auto* cpx_cmd = app.add_subcommand("complexity", "largest contranomial scale in the context");
  add_source(cpx_cmd, cpx);
  cpx_cmd->add_option("--budget", budget, "search node budget")->capture_default_str();

  OracleOpts orc;
  auto* orc_cmd = app.add_subcommand("oracle", "brute-force transfer system enumeration");
  orc_cmd->add_option("mode", orc.mode, "count, list or verify")->required()->check(CLI::IsMember({"count", "list", "verify"}));
  add_source(orc_cmd, orc.src, false);
  orc_cmd->add_flag("--saturated", orc.saturated, "saturated transfer systems only");
  orc_cmd->add_option("--cap", orc.cap, "largest number of orbit pairs")->capture_default_str();

  auto* frm = app.add_subcommand("formula", "closed-form counts, codensities and bounds");
  frm->require_subcommand(1);
  std::uint64_t fa = 0, fb = 0;
  std::string flist, family, fparams;
  auto* f_chain = frm->add_subcommand("rho-chain", "codensity for [n]");
  f_chain->add_option("n", fa)->required();
  auto* f_grid = frm->add_subcommand("rho-grid", "codensity for [n] x [m]");
  f_grid->add_option("n", fa)->required();
  f_grid->add_option("m", fb)->required();
  auto* f_cyc = frm->add_subcommand("rho-cyclic", "codensity for C_N with exponents n1,n2,...");
  f_cyc->add_option("exponents", flist)->required();
  auto* f_bool = frm->add_subcommand("rho-boolean", "codensity for [1]^k");
  f_bool->add_option("k", fa)->required();
  auto* f_ea = frm->add_subcommand("rho-elem-abelian", "codensity for C_p^n");
  f_ea->add_option("p", fa)->required();
  f_ea->add_option("n", fb)->required();
  auto* f_j = frm->add_subcommand("j-count", "number of join-irreducibles");
  f_j->add_option("family", family)->required()->check(CLI::IsMember({"chain", "grid", "cyclic", "boolean", "elem-abelian"}));
  f_j->add_option("params", fparams, "comma-separated parameters")->required();
  SourceOpts bsrc;
  unsigned bthreads = std::max(1U, std::thread::hardware_concurrency());
  auto* f_bounds = frm->add_subcommand("bounds", "concept count against the Schuett, trivial and contranomial bounds");
  add_source(f_bounds, bsrc);
  f_bounds->add_option("--budget", budget, "contranomial search node budget");
  f_bounds->add_option("--threads", bthreads, "worker threads");
  SourceOpts fcsrc;
  auto* f_cpx = frm->add_subcommand("complexity", "largest contranomial scale in the context");
  add_source(f_cpx, fcsrc);
  f_cpx->add_option("--budget", budget, "search node budget");
  std::uint64_t conj_n = 10000;
  std::string conj_tol = "1/1000";
  auto* f_conj = frm->add_subcommand("conjecture", "(2^k - 1)/6^k against rho([n]^k)");
  f_conj->add_option("k", fa)->required();
  f_conj->add_option("--n", conj_n, "chain length used for the comparison")->capture_default_str();
  f_conj->add_option("--tol", conj_tol, "tolerance as num/den or integer")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*ctx_cmd) return run_export(ctx_opts);
    if (*exp_cmd) return run_export(exp_opts);
    if (*cnt_cmd) return run_count(cnt);
    if (*den_cmd) return run_density(den);
    if (*cpx_cmd) return run_complexity(cpx, budget);
    if (*orc_cmd) return run_oracle(orc);
    if (*f_chain) std::cout << show(rho_chain(fa)) << '\n';
    if (*f_grid) std::cout << show(rho_grid(fa, fb)) << '\n';
    if (*f_cyc) std::cout << show(rho_cyclic(parse_list(flist))) << '\n';
    if (*f_bool) std::cout << show(rho_boolean(fa)) << '\n';
    if (*f_ea) {
      if (!is_prime(fa)) std::cerr << "warning: p = " << fa << " is not prime; evaluating the q-analogue\n";
      std::cout << show(rho_elem_abelian(fa, fb)) << '\n';
    }
    if (*f_j) std::cout << j_count(family, parse_list(fparams)) << '\n';
    if (*f_bounds) return run_bounds(bsrc, budget, bthreads);
    if (*f_cpx) return run_complexity(fcsrc, budget);
    if (*f_conj) {
      const auto slash = conj_tol.find('/');
      const ExactRational tol =
          slash == std::string::npos
              ? ExactRational(BigInt(detail::parse_uint(conj_tol, "tolerance")))
              : ExactRational(BigInt(detail::parse_uint(std::string_view(conj_tol).substr(0, slash), "tolerance")),
                              BigInt(detail::parse_uint(std::string_view(conj_tol).substr(slash + 1), "tolerance")));
      const auto limit = conjectured_limit(fa);
      const auto value = rho_cyclic(std::vector<std::uint64_t>(fa, conj_n));
      std::cout << "conjecture " << show(limit) << "\nrho        " << value.to_decimal(12) << "\nwithin tol "
                << (limit_table_check(fa, conj_n, tol) ? "yes" : "no") << '\n';
    }
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const CounterOverflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOverflow;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
}

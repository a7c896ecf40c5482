#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>

#include "tensorcert/biased.hpp"
#include "tensorcert/registry.hpp"
#include "tensorcert/rng.hpp"
#include "tensorcert/serialize.hpp"

namespace tensorcert::cli {

namespace {

constexpr const char* kSchema = "tensorcert/1";

struct Common {
  std::string field_name = "Q";
  std::uint64_t seed = 0;
  std::string format = "text";
  FieldSpec field() const {
    if (field_name == "Q") return FieldSpec::rationals();
    if (!field_name.empty() && field_name[0] == 'F')
      return FieldSpec::prime(Int(field_name.substr(1)));
    throw CLI::ValidationError("--field", "expected Q or F<p>");
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--field", c.field_name, "coefficient field: Q or F<p>")
      ->default_val("Q");
  cmd->add_option("--seed", c.seed, "seed for any randomized phase")->default_val(0);
  cmd->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->default_val("text");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

FieldSpec file_field(const json& j, const Common& c) {
  if (j.contains("field")) return field_from_json(j.at("field"));
  return c.field();
}

Decomposition get_decomposition(const std::string& path, const std::string& builtin,
                                const Common& c, json* metadata = nullptr) {
  if (!builtin.empty()) return builtin_decomposition(builtin, c.field());
  if (path.empty()) throw CLI::ValidationError("input", "need a file or --builtin");
  return load_decomposition(path, metadata);
}

std::vector<Matrix> family_from_json(const json& j, const FieldSpec& field) {
  if (!j.contains("vectors")) throw ParseError("family file needs a 'vectors' array");
  std::vector<Matrix> out;
  for (const auto& m : j.at("vectors")) out.push_back(matrix_from_json(m, field));
  return out;
}

int worker_count() {
  const char* env = std::getenv("TENSORCERT_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

void emit_report(const json& report, const Common& c, std::ostream& out,
                 const std::vector<std::string>& text_lines) {
  if (c.format == "json") {
    json j = report;
    j["schema"] = kSchema;
    j["seed"] = c.seed;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& line : text_lines) out << line << "\n";
  }
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

Tensor tensor_from_flags(const std::vector<int>& matmul, const std::vector<int>& cyclic,
                         const std::string& file, const Common& c) {
  if (!matmul.empty()) {
    if (matmul.size() != 3) throw CLI::ValidationError("--matmul", "expected n1,n2,n3");
    return matmul_tensor(matmul[0], matmul[1], matmul[2], c.field());
  }
  if (!cyclic.empty()) return cyclic_tensor(cyclic, c.field());
  if (!file.empty()) return evaluate_decomposition(load_decomposition(file));
  throw CLI::ValidationError("input", "need --matmul, --cyclic, or a decomposition file");
}

// ---------------------------------------------------------------------- verify

int run_verify(const std::string& path, const std::string& builtin, const std::string& target_path,
               int eps_h, int eps_order, const Common& c, std::ostream& out) {
  json metadata;
  Decomposition d = get_decomposition(path, builtin, c, &metadata);
  auto target_tensor = [&](const FieldSpec& field) {
    if (!target_path.empty()) {
      Decomposition t = load_decomposition(target_path);
      if (t.shape.field != field)
        throw std::invalid_argument("target file lives over a different field");
      return evaluate_decomposition(t);
    }
    std::vector<int> dims;
    if (!cyclic_dims(d.shape, &dims))
      throw std::invalid_argument(
          "cannot infer a cyclic target for this shape; pass --target");
    return cyclic_tensor(dims, field);
  };
  CertificateReport rep;
  if (eps_h >= 0) {
    if (!d.shape.field.is_eps()) {
      int order = eps_order > 0 ? eps_order : eps_h + 2;
      d = lift_to_eps(d, order);
    }
    rep = verify_infinitesimal(d, target_tensor(d.shape.field.base()), eps_h);
  } else {
    rep = verify_exact(d, target_tensor(d.shape.field));
  }
  json j = certificate_to_json(rep);
  j["command"] = "verify";
  std::vector<std::string> lines;
  if (rep.verified) {
    lines.push_back("verified, r=" + std::to_string(rep.term_count));
    if (rep.h >= 0)
      lines.push_back("remainder at eps^" + std::to_string(rep.h + 1) + ": " +
                      std::to_string(rep.remainder_nonzero) + " nonzero entries (unconstrained)");
  } else {
    lines.push_back("failed: " + rep.mismatch_location);
  }
  emit_report(j, c, out, lines);
  return rep.verified ? 0 : 1;
}

// ---------------------------------------------------------------------- bounds

int finish_bound(const BoundReport& rep, const char* command, const Common& c, std::ostream& out) {
  json j = bound_report_to_json(rep);
  j["command"] = command;
  std::vector<std::string> lines;
  lines.push_back(std::string(rep.holds ? "holds" : "VIOLATED") + ": lhs=" +
                  std::to_string(rep.bound_lhs) + " <= rank sum " + std::to_string(rep.rank_sum) +
                  (rep.equality ? " (equality)" : ""));
  lines.push_back("per-term ranks: (" + join_ints(rep.per_term_ranks) + ")");
  lines.push_back("support: {" + join_ints(rep.support.indices) + "}");
  emit_report(j, c, out, lines);
  return rep.holds ? 0 : 1;
}

// ---------------------------------------------------------------------- main

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact certificates and lower-bound checks for matrix-multiplication tensors"};
  app.require_subcommand(1);

  Common c;

  // ---- verify
  auto* verify = app.add_subcommand(
      "verify", "check a rank-1 decomposition against its cyclic target tensor, exactly or as "
                "an eps^h family with O(eps^{h+1}) remainder");
  std::string v_path, v_builtin, v_target;
  int v_eps = -1, v_order = 0;
  verify->add_option("file", v_path, "decomposition JSON file");
  verify->add_option("--builtin", v_builtin, "builtin decomposition (strassen, naive-AxBxC)");
  verify->add_option("--target", v_target,
                     "decomposition file whose evaluation is the target tensor "
                     "(default: the cyclic tensor of the input's shape)");
  verify->add_option("--eps", v_eps, "verify as an h-infinitesimal family with this h");
  verify->add_option("--eps-order", v_order, "truncation order of the eps ring (default h+2)");
  add_common(verify, c);

  // ---- bound
  auto* bound = app.add_subcommand("bound", "lower-bound inequalities on decompositions");
  bound->require_subcommand(1);
  std::string b_path, b_builtin, b_operator, b_zh, b_maps;
  int b_factor = 3;
  int b_random = 0;

  auto* b_inner = bound->add_subcommand(
      "inner-rank", "product-of-dims <= sum of per-term matrix ranks of one factor, optionally "
                    "after an operator L (a singular L scales the left side by rank L)");
  b_inner->add_option("file", b_path, "decomposition JSON file");
  b_inner->add_option("--builtin", b_builtin, "builtin decomposition");
  b_inner->add_option("--factor", b_factor, "factor index, 1-based")->default_val(3);
  b_inner->add_option("--operator", b_operator, "operator JSON file applied to the factor");
  b_inner->add_option("--random-invertible", b_random,
                      "use the k-th seeded random invertible operator instead");
  add_common(b_inner, c);

  auto* b_ann = bound->add_subcommand(
      "annihilate", "dim Span{zeta.eta} <= number of terms whose first two factors survive "
                    "dotting against Z and H");
  b_ann->add_option("file", b_path, "decomposition JSON file");
  b_ann->add_option("--builtin", b_builtin, "builtin decomposition");
  b_ann->add_option("--zh", b_zh, "JSON file with Z and H subspaces")->required();
  add_common(b_ann, c);

  auto* b_psi = bound->add_subcommand(
      "psi", "rank of the annihilation map Psi_{Z,H} <= support-restricted inner-rank sum");
  b_psi->add_option("file", b_path, "decomposition JSON file");
  b_psi->add_option("--builtin", b_builtin, "builtin decomposition");
  b_psi->add_option("--zh", b_zh, "JSON file with Z and H subspaces")->required();
  b_psi->add_option("--operator", b_operator, "operator applied to the third factor");
  add_common(b_psi, c);

  auto* b_gen = bound->add_subcommand(
      "general", "rank of Psi built from maps M, N and a splitting L of the third factor <= "
                 "inner-rank sum over terms M and N keep alive");
  b_gen->add_option("file", b_path, "decomposition JSON file");
  b_gen->add_option("--builtin", b_builtin, "builtin decomposition");
  b_gen->add_option("--maps", b_maps, "JSON file with operators M, N, L")->required();
  add_common(b_gen, c);

  // ---- construct
  auto* construct = app.add_subcommand(
      "construct", "build an invertible operator sending every member of a spanning family of "
                   "at most n^2+1 nonzero matrices to a rank-1 matrix");
  std::string k_family;
  std::string k_out;
  construct->add_option("family", k_family, "family JSON file")->required();
  construct->add_option("--out", k_out, "write the operator JSON here");
  add_common(construct, c);

  // ---- overlap
  auto* ovl = app.add_subcommand(
      "overlap", "maximum of |family meet U| - dim U over proper subspaces U (exhaustive over "
                 "subset spans)");
  std::string o_family, o_subspace;
  ovl->add_option("family", o_family, "family JSON file")->required();
  ovl->add_option("--subspace", o_subspace, "evaluate the overlap at this one subspace instead");
  add_common(ovl, c);

  // ---- search
  auto* search = app.add_subcommand("search", "deterministic and seeded searches");
  search->require_subcommand(1);
  std::string s_zeta, s_eta, s_question, s_family;
  int s_n = 2, s_budget = 8, s_prefix = 1;
  long long s_combo_budget = 4096;

  auto* s_tame = search->add_subcommand(
      "tame", "first pair of n-element subsets of two matrix-space bases whose annihilation map "
              "Psi_{Z,H} reaches full rank n^2");
  s_tame->add_option("--n", s_n, "matrix size n")->required();
  s_tame->add_option("--zeta", s_zeta, "zeta basis JSON file (default: standard basis)");
  s_tame->add_option("--eta", s_eta, "eta basis JSON file (default: standard basis)");
  add_common(s_tame, c);

  auto* s_max = search->add_subcommand(
      "maxrank", "lower-bound the maximal Psi rank of a quotient question by scanning the "
                 "canonical quotients plus seeded random basis changes");
  s_max->add_option("question", s_question, "JSON file with subspaces A and B (and optional L)")
      ->required();
  s_max->add_option("--budget", s_budget, "number of candidates")->default_val(8);
  add_common(s_max, c);

  auto* s_combo = search->add_subcommand(
      "invertible-combo", "combination of the prefix sum and at most n-s further family members "
                          "that is invertible (s = rank of the prefix sum)");
  s_combo->add_option("family", s_family, "family JSON file")->required();
  s_combo->add_option("--prefix", s_prefix, "prefix length s'")->default_val(1);
  s_combo->add_option("--budget", s_combo_budget, "randomized trials per subset")
      ->default_val(4096);
  add_common(s_combo, c);

  // ---- flatten
  auto* flat = app.add_subcommand(
      "flatten", "regroup a tensor's index slots into a matrix and report its exact rank");
  std::vector<int> f_matmul, f_cyclic;
  std::string f_file, f_grouping = "pi", f_aprime;
  int f_koszul = -1;
  flat->add_option("--matmul", f_matmul, "matrix multiplication tensor n1,n2,n3")
      ->delimiter(',');
  flat->add_option("--cyclic", f_cyclic, "cyclic tensor dims")->delimiter(',');
  flat->add_option("file", f_file, "decomposition file to evaluate and flatten");
  flat->add_option("--grouping", f_grouping,
                   "pi | pairing | factor:<k> | a custom L/R string over slots");
  flat->add_option("--koszul", f_koszul,
                   "wedge degree p for the exterior-algebra flattening of a 3-tensor");
  flat->add_option("--aprime", f_aprime, "subspace of the first factor for the wedge flattening");
  add_common(flat, c);

  // ---- compose
  auto* compose = app.add_subcommand("compose", "build decompositions from decompositions");
  compose->require_subcommand(1);
  std::string c_a, c_b, c_out;
  auto* c_kron = compose->add_subcommand(
      "kronecker", "factor-wise Kronecker product; evaluates to the product tensor");
  c_kron->add_option("left", c_a)->required();
  c_kron->add_option("right", c_b)->required();
  c_kron->add_option("--out", c_out, "output decomposition file")->required();
  add_common(c_kron, c);
  auto* c_lift = compose->add_subcommand(
      "lift", "raise a cyclic-tensor decomposition by one factor (at most r n^2 terms)");
  c_lift->add_option("input", c_a)->required();
  c_lift->add_option("--out", c_out)->required();
  add_common(c_lift, c);
  auto* c_contract = compose->add_subcommand(
      "contract", "lower a cyclic-tensor decomposition by one factor (at most r terms)");
  c_contract->add_option("input", c_a)->required();
  c_contract->add_option("--out", c_out)->required();
  add_common(c_contract, c);

  // ---- stats
  auto* st = app.add_subcommand(
      "stats", "per-factor span, maximum proper overlap, inner-rank sum and average rank");
  std::string st_path, st_builtin;
  st->add_option("file", st_path, "decomposition JSON file");
  st->add_option("--builtin", st_builtin, "builtin decomposition");
  add_common(st, c);

  // ---- biased-dim
  auto* bd = app.add_subcommand(
      "biased-dim", "trace of the orthogonal restriction of a symmetric bias matrix to "
                    "subspaces; complement law and modularity defect");
  std::string bd_file;
  bd->add_option("input", bd_file, "JSON file with D and S (or S1, S2)")->required();
  add_common(bd, c);

  // ---- emit
  auto* em = app.add_subcommand("emit", "write a builtin decomposition to a file");
  std::string e_builtin, e_out;
  em->add_option("--builtin", e_builtin)->required();
  em->add_option("--out", e_out)->required();
  add_common(em, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*verify) return run_verify(v_path, v_builtin, v_target, v_eps, v_order, c, out);

    if (*b_inner) {
      Decomposition d = get_decomposition(b_path, b_builtin, c);
      std::optional<MatrixSpaceOperator> L;
      if (!b_operator.empty())
        L = operator_from_json(load_json(b_operator), d.shape.field);
      else if (b_random > 0) {
        Rng rng(c.seed);
        auto [fr, fc] = d.shape.factors[b_factor - 1];
        for (int k = 0; k < b_random; ++k) L = rng.invertible_operator(fr, fc, d.shape.field);
      }
      return finish_bound(inner_rank_sum(d, b_factor, L), "bound inner-rank", c, out);
    }
    if (*b_ann || *b_psi) {
      Decomposition d = get_decomposition(b_path, b_builtin, c);
      json zh = load_json(b_zh);
      FieldSpec field = file_field(zh, c);
      if (field != d.shape.field) throw ParseError("Z/H field differs from the decomposition");
      Subspace Z = subspace_from_json(zh.at("Z"), field);
      Subspace H = subspace_from_json(zh.at("H"), field);
      if (*b_ann) return finish_bound(annihilation_bound(d, Z, H), "bound annihilate", c, out);
      std::optional<MatrixSpaceOperator> L;
      if (!b_operator.empty()) L = operator_from_json(load_json(b_operator), field);
      return finish_bound(psi_support_bound(d, Z, H, L), "bound psi", c, out);
    }
    if (*b_gen) {
      Decomposition d = get_decomposition(b_path, b_builtin, c);
      json maps = load_json(b_maps);
      FieldSpec field = file_field(maps, c);
      MatrixSpaceOperator M = operator_from_json(maps.at("M"), field);
      MatrixSpaceOperator N = operator_from_json(maps.at("N"), field);
      MatrixSpaceOperator L = operator_from_json(maps.at("L"), field);
      return finish_bound(general_psi_bound(d, M, N, L), "bound general", c, out);
    }

    if (*construct) {
      json fam = load_json(k_family);
      FieldSpec field = file_field(fam, c);
      std::vector<Matrix> vs = family_from_json(fam, field);
      MatrixSpaceOperator L = construct_rank_one_operator(vs);
      json j;
      j["command"] = "construct";
      j["operator"] = operator_to_json(L);
      j["invertible"] = L.is_invertible();
      std::vector<int> image_ranks;
      for (const auto& v : vs) image_ranks.push_back(L.apply(v).rank());
      j["image_ranks"] = image_ranks;
      if (!k_out.empty()) {
        std::ofstream o(k_out);
        o << operator_to_json(L).dump(2) << "\n";
      }
      emit_report(j, c, out,
                  {"constructed invertible operator; image ranks: (" + join_ints(image_ranks) +
                   ")"});
      return 0;
    }

    if (*ovl) {
      json fam = load_json(o_family);
      FieldSpec field = file_field(fam, c);
      std::vector<Matrix> vs = family_from_json(fam, field);
      json j;
      j["command"] = "overlap";
      std::vector<std::string> lines;
      if (!o_subspace.empty()) {
        Subspace U = subspace_from_json(load_json(o_subspace), field);
        long long val = overlap(vs, U);
        j["overlap"] = val;
        lines.push_back("overlap at the given subspace: " + std::to_string(val));
      } else {
        OverlapReport rep = max_proper_overlap(vs);
        j["max_proper_overlap"] = rep.value;
        j["witness"] = subspace_to_json(rep.witness);
        lines.push_back("max proper overlap: " + std::to_string(rep.value) + " (witness dim " +
                        std::to_string(rep.witness.dim()) + ")");
      }
      emit_report(j, c, out, lines);
      return 0;
    }

    if (*s_tame) {
      FieldSpec field = c.field();
      std::vector<Matrix> zeta, eta;
      if (!s_zeta.empty()) zeta = family_from_json(load_json(s_zeta), field);
      if (!s_eta.empty()) eta = family_from_json(load_json(s_eta), field);
      if (zeta.empty())
        for (int i = 0; i < s_n; ++i)
          for (int jj = 0; jj < s_n; ++jj) zeta.push_back(Matrix::unit(s_n, s_n, i, jj, field));
      if (eta.empty()) eta = zeta;
      auto witness = tame_search(zeta, eta, s_n, worker_count());
      json j;
      j["command"] = "search tame";
      j["found"] = witness.has_value();
      std::vector<std::string> lines;
      if (witness) {
        j["zeta_indices"] = witness->zeta_indices;
        j["eta_indices"] = witness->eta_indices;
        j["psi_rank"] = witness->psi.rank();
        j["candidates_tried"] = witness->candidates_tried;
        lines.push_back("found Z (basis elements " + join_ints(witness->zeta_indices) +
                        ") and H (basis elements " + join_ints(witness->eta_indices) +
                        ") with Psi of full rank " + std::to_string(witness->psi.rank()));
      } else {
        lines.push_back("exhausted all candidate pairs without reaching full rank: "
                        "counterexample certificate for these bases");
      }
      emit_report(j, c, out, lines);
      return witness ? 0 : 1;
    }

    if (*s_max) {
      json q = load_json(s_question);
      FieldSpec field = file_field(q, c);
      QuotientQuestion quest{matmul_tensor(1, 1, 1, field),
                             subspace_from_json(q.at("A"), field),
                             subspace_from_json(q.at("B"), field), std::nullopt};
      int n1 = quest.A.ambient_rows(), n2 = quest.A.ambient_cols(), n3 = quest.B.ambient_cols();
      quest.tensor = matmul_tensor(n1, n2, n3, field);
      if (q.contains("L")) quest.Lsplit = operator_from_json(q.at("L"), field);
      MaxRankReport rep = max_rank_search(quest, s_budget, c.seed);
      json j;
      j["command"] = "search maxrank";
      j["best"] = rep.best;
      j["best_candidate"] = rep.best_candidate;
      j["optimistic"] = rep.optimistic;
      emit_report(j, c, out,
                  {"best Psi rank found: " + std::to_string(rep.best) + " (candidate " +
                       std::to_string(rep.best_candidate) + ", optimistic cap " +
                       std::to_string(rep.optimistic) + ")"});
      return 0;
    }

    if (*s_combo) {
      json fam = load_json(s_family);
      FieldSpec field = file_field(fam, c);
      std::vector<Matrix> vs = family_from_json(fam, field);
      ComboReport rep = complete_to_invertible(vs, s_prefix, c.seed, s_combo_budget);
      json j;
      j["command"] = "search invertible-combo";
      j["found"] = rep.found;
      j["inconclusive"] = rep.inconclusive;
      j["prefix_rank"] = rep.s;
      std::vector<std::string> lines;
      if (rep.found) {
        j["extra_indices"] = rep.extra_indices;
        json coeffs = json::array();
        for (const auto& s : rep.coefficients) coeffs.push_back(s.str());
        j["coefficients"] = coeffs;
        lines.push_back("invertible combination found: prefix sum (rank " + std::to_string(rep.s) +
                        ") plus " + std::to_string(rep.extra_indices.size()) + " extra vectors");
      } else {
        lines.push_back("no invertible combination found within the search budget (inconclusive)");
      }
      emit_report(j, c, out, lines);
      return rep.found ? 0 : 1;
    }

    if (*flat) {
      Tensor t = tensor_from_flags(f_matmul, f_cyclic, f_file, c);
      Matrix m(1, 1, t.field());
      std::string what;
      if (f_koszul >= 0) {
        auto [ar, ac] = t.shape().factors[0];
        Subspace aprime = f_aprime.empty()
                              ? Subspace::full(ar, ac, t.field())
                              : subspace_from_json(load_json(f_aprime), t.field());
        m = koszul_flatten(t, f_koszul, aprime);
        what = "koszul p=" + std::to_string(f_koszul);
      } else if (f_grouping == "pi") {
        m = flatten(t, FlattenGrouping::pi());
        what = "pi";
      } else if (f_grouping == "pairing") {
        m = flatten(t, FlattenGrouping::pairing(t.arity()));
        what = "pairing";
      } else if (f_grouping.rfind("factor:", 0) == 0) {
        int k = std::stoi(f_grouping.substr(7));
        m = flatten(t, FlattenGrouping::single_factor(t.arity(), k - 1));
        what = f_grouping;
      } else {
        FlattenGrouping g;
        for (char ch : f_grouping)
          g.slots.push_back(ch == 'L' || ch == 'l' ? Side::left : Side::right);
        m = flatten(t, g);
        what = "custom";
      }
      json j;
      j["command"] = "flatten";
      j["grouping"] = what;
      j["rows"] = m.rows();
      j["cols"] = m.cols();
      j["rank"] = m.rank();
      emit_report(j, c, out,
                  {what + " flattening: " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", rank " + std::to_string(m.rank())});
      return 0;
    }

    if (*c_kron || *c_lift || *c_contract) {
      Decomposition a = load_decomposition(c_a);
      Decomposition result = a;
      std::string what;
      if (*c_kron) {
        Decomposition b = load_decomposition(c_b);
        result = kronecker_compose(a, b);
        what = "kronecker";
      } else if (*c_lift) {
        result = lift_kappa(a);
        what = "lift";
      } else {
        result = contract_kappa(a);
        what = "contract";
      }
      save_decomposition(result, c_out, json{{"source", what}});
      json j;
      j["command"] = "compose " + what;
      j["terms"] = result.rank();
      emit_report(j, c, out,
                  {what + ": wrote " + std::to_string(result.rank()) + " terms to " + c_out});
      return 0;
    }

    if (*st) {
      Decomposition d = get_decomposition(st_path, st_builtin, c);
      DecompositionStats s = stats(d);
      json j = stats_to_json(s);
      j["command"] = "stats";
      std::vector<std::string> lines;
      lines.push_back("r=" + std::to_string(s.term_count));
      for (size_t f = 0; f < s.factors.size(); ++f) {
        const auto& fs = s.factors[f];
        lines.push_back("factor " + std::to_string(f + 1) + ": span " +
                        std::to_string(fs.span_dim) + ", max proper overlap " +
                        std::to_string(fs.max_overlap) + ", rank sum " +
                        std::to_string(fs.rank_sum) + ", average " + fs.average_rank.str() +
                        ", ranks (" + join_ints(fs.per_term_ranks) + ")");
      }
      emit_report(j, c, out, lines);
      return 0;
    }

    if (*bd) {
      json in = load_json(bd_file);
      FieldSpec field = FieldSpec::rationals();
      BiasMatrix D(matrix_from_json(in.at("D"), field));
      json j;
      j["command"] = "biased-dim";
      std::vector<std::string> lines;
      auto load_space = [&](const json& js) { return subspace_from_json(js, field); };
      if (in.contains("S1") && in.contains("S2")) {
        Subspace s1 = load_space(in.at("S1")), s2 = load_space(in.at("S2"));
        Scalar defect = modularity_defect(D, s1, s2);
        j["dim_S1"] = biased_dim(D, s1).str();
        j["dim_S2"] = biased_dim(D, s2).str();
        j["modularity_defect"] = defect.str();
        j["right_angled"] = right_angled(s1, s2);
        lines.push_back("modularity defect: " + defect.str());
      } else {
        Subspace s = load_space(in.at("S"));
        Scalar dim = biased_dim(D, s);
        Scalar codim = biased_dim(D, s.dot_complement());
        j["dim"] = dim.str();
        j["dim_complement"] = codim.str();
        Scalar trace = Scalar::zero(field);
        for (int i = 0; i < D.D.rows(); ++i) trace = trace + D.D.at(i, i);
        j["trace"] = trace.str();
        j["complement_law"] = (dim + codim == trace);
        lines.push_back("dim_D(S) = " + dim.str() + ", dim_D(S^perp) = " + codim.str() +
                        ", trace = " + trace.str());
      }
      emit_report(j, c, out, lines);
      return 0;
    }

    if (*em) {
      Decomposition d = builtin_decomposition(e_builtin, c.field());
      save_decomposition(d, e_out, json{{"name", e_builtin}});
      json j;
      j["command"] = "emit";
      j["terms"] = d.rank();
      j["path"] = e_out;
      emit_report(j, c, out, {"wrote " + e_builtin + " (" + std::to_string(d.rank()) +
                                  " terms) to " + e_out});
      return 0;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace tensorcert::cli

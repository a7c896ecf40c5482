#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "tensorcert/registry.hpp"
#include "tensorcert/serialize.hpp"

using namespace tensorcert;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verify builtin") {
  Run r = run({"verify", "--builtin", "strassen"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verified, r=7") != std::string::npos);

  Run f2 = run({"verify", "--builtin", "strassen", "--field", "F2"});
  CHECK(f2.code == 0);

  Run naive = run({"verify", "--builtin", "naive-2x3x4"});
  CHECK(naive.code == 0);
}

TEST_CASE("verify catches corrupted terms") {
  Decomposition d = strassen(FieldSpec::rationals());
  d.terms[2].factors[1].at(0, 1) = Scalar::from_int(9, FieldSpec::rationals());
  save_decomposition(d, "cli_bad.json");
  Run r = run({"verify", "cli_bad.json"});
  CHECK(r.code == 1);
  CHECK(r.out.find("failed") != std::string::npos);
  CHECK(r.out.find("entry") != std::string::npos);
  remove("cli_bad.json");
}

TEST_CASE("verify infinitesimal lift") {
  Run r = run({"verify", "--builtin", "strassen", "--eps", "0"});
  CHECK(r.code == 0);
}

TEST_CASE("verify an eps family against a file target") {
  // family (x+ty)^3 - x^3 over 1x2 factors, target the symmetric 3-tensor
  FieldSpec ring = FieldSpec::eps(FieldSpec::rationals(), 3);
  Matrix xy(1, 2, ring), mx(1, 2, ring), x(1, 2, ring);
  xy.at(0, 0) = parse_scalar("[1]", ring);
  xy.at(0, 1) = parse_scalar("[0,1]", ring);
  x.at(0, 0) = parse_scalar("[1]", ring);
  mx.at(0, 0) = parse_scalar("[-1]", ring);
  Decomposition fam;
  fam.shape = {{{1, 2}, {1, 2}, {1, 2}}, ring};
  fam.terms.push_back({{xy, xy, xy}});
  fam.terms.push_back({{mx, x, x}});
  save_decomposition(fam, "cli_eps_family.json");

  FieldSpec q = FieldSpec::rationals();
  Decomposition target;
  target.shape = {{{1, 2}, {1, 2}, {1, 2}}, q};
  auto vec = [&](int i) {
    Matrix m(1, 2, q);
    m.at(0, i) = Scalar::one(q);
    return m;
  };
  target.terms.push_back({{vec(0), vec(0), vec(1)}});
  target.terms.push_back({{vec(0), vec(1), vec(0)}});
  target.terms.push_back({{vec(1), vec(0), vec(0)}});
  save_decomposition(target, "cli_eps_target.json");

  Run ok = run({"verify", "cli_eps_family.json", "--eps", "1", "--target",
                "cli_eps_target.json"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("remainder") != std::string::npos);
  Run bad = run({"verify", "cli_eps_family.json", "--eps", "0", "--target",
                 "cli_eps_target.json"});
  CHECK(bad.code == 1);
  remove("cli_eps_family.json");
  remove("cli_eps_target.json");
}

TEST_CASE("bound inner-rank") {
  Run r = run({"bound", "inner-rank", "--builtin", "strassen", "--factor", "3", "--format",
               "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["verdict"] == "holds");
  CHECK(j["equality"] == true);
  CHECK(j["lhs"] == 8);
  CHECK(j["per_term_ranks"] == json::array({2, 1, 1, 1, 1, 1, 1}));
  CHECK(j["schema"] == "tensorcert/1");
}

TEST_CASE("bound psi and annihilate") {
  json zh;
  zh["field"] = "Q";
  zh["Z"] = {{"ambient", {2, 2}},
             {"basis", json::array({json::array({json::array({"0", "1"}),
                                                 json::array({"0", "0"})})})}};
  zh["H"] = {{"ambient", {2, 2}},
             {"basis", json::array({
                           json::array({json::array({"1", "0"}), json::array({"0", "0"})}),
                           json::array({json::array({"0", "1"}), json::array({"0", "0"})}),
                           json::array({json::array({"0", "0"}), json::array({"1", "0"})}),
                           json::array({json::array({"0", "0"}), json::array({"0", "1"})}),
                       })}};
  std::ofstream("cli_zh.json") << zh.dump();
  Run r = run({"bound", "psi", "--builtin", "strassen", "--zh", "cli_zh.json", "--format",
               "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["support"] == json::array({5, 7}));
  Run a = run({"bound", "annihilate", "--builtin", "strassen", "--zh", "cli_zh.json"});
  CHECK(a.code == 0);
  remove("cli_zh.json");
}

TEST_CASE("report schema is stable") {
  Run r = run({"verify", "--builtin", "strassen", "--format", "json"});
  CHECK(r.out ==
        "{\n"
        "  \"command\": \"verify\",\n"
        "  \"schema\": \"tensorcert/1\",\n"
        "  \"seed\": 0,\n"
        "  \"statistics\": {\n"
        "    \"field\": \"Q\",\n"
        "    \"terms\": 7\n"
        "  },\n"
        "  \"status\": \"verified\"\n"
        "}\n");
}

TEST_CASE("bound general with explicit maps") {
  json maps;
  maps["field"] = "Q";
  auto id4 = json{{"in", {2, 2}},
                  {"out", {2, 2}},
                  {"matrix",
                   json::array({json::array({"1", "0", "0", "0"}),
                                json::array({"0", "1", "0", "0"}),
                                json::array({"0", "0", "1", "0"}),
                                json::array({"0", "0", "0", "1"})})}};
  maps["M"] = id4;
  maps["N"] = id4;
  maps["L"] = id4;
  std::ofstream("cli_maps.json") << maps.dump();
  Run r = run({"bound", "general", "--builtin", "strassen", "--maps", "cli_maps.json",
               "--format", "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["lhs"] == 8);  // identity maps give the full flattening rank
  CHECK(j["verdict"] == "holds");
  remove("cli_maps.json");
}

TEST_CASE("nested subcommand help") {
  CHECK(run({"bound", "psi", "--help"}).code == 0);
  CHECK(run({"search", "tame", "--help"}).code == 0);
}

TEST_CASE("eps lift over a prime base field") {
  Run r = run({"verify", "--builtin", "strassen", "--field", "F2", "--eps", "0"});
  CHECK(r.code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"verify", "--no-such-flag"}).code == 2);
  CHECK(run({"unknown-subcommand"}).code == 2);
  CHECK(run({"verify", "missing-file.json"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("help exits 0 and names the inequality") {
  Run r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("emit then stats round trip") {
  Run e = run({"emit", "--builtin", "strassen", "--out", "cli_emit.json"});
  CHECK(e.code == 0);
  Run s = run({"stats", "cli_emit.json", "--format", "json"});
  CHECK(s.code == 0);
  json j = json::parse(s.out);
  CHECK(j["terms"] == 7);
  CHECK(j["factors"][2]["average_rank"] == "8/7");
  CHECK(j["factors"][2]["span_dim"] == 4);
  remove("cli_emit.json");
}

TEST_CASE("flatten command") {
  Run r = run({"flatten", "--matmul", "2,2,2", "--format", "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["rank"] == 8);
  Run k = run({"flatten", "--matmul", "2,2,2", "--koszul", "1"});
  CHECK(k.code == 0);
  CHECK(k.out.find("rank 16") != std::string::npos);
  Run p = run({"flatten", "--cyclic", "2,2,2,2", "--grouping", "pairing"});
  CHECK(p.code == 0);
  CHECK(p.out.find("rank 16") != std::string::npos);
}

TEST_CASE("compose commands") {
  run({"emit", "--builtin", "strassen", "--out", "cli_s.json"});
  Run k = run({"compose", "kronecker", "cli_s.json", "cli_s.json", "--out", "cli_s2.json"});
  CHECK(k.code == 0);
  Decomposition s2 = load_decomposition("cli_s2.json");
  CHECK(s2.rank() == 49);
  Run v = run({"verify", "cli_s2.json"});
  CHECK(v.code == 0);
  Run l = run({"compose", "lift", "cli_s.json", "--out", "cli_s4.json"});
  CHECK(l.code == 0);
  CHECK(load_decomposition("cli_s4.json").rank() <= 28);
  Run c = run({"compose", "contract", "cli_s4.json", "--out", "cli_s3.json"});
  CHECK(c.code == 0);
  Run v3 = run({"verify", "cli_s3.json"});
  CHECK(v3.code == 0);
  for (const char* p : {"cli_s.json", "cli_s2.json", "cli_s4.json", "cli_s3.json"}) remove(p);
}

TEST_CASE("overlap and construct commands") {
  json fam;
  fam["field"] = "Q";
  fam["vectors"] = json::array();
  Decomposition d = strassen(FieldSpec::rationals());
  for (const auto& t : d.terms) fam["vectors"].push_back(matrix_to_json(t.factors[2]));
  std::ofstream("cli_fam.json") << fam.dump();
  Run o = run({"overlap", "cli_fam.json", "--format", "json"});
  CHECK(o.code == 0);
  CHECK(json::parse(o.out)["max_proper_overlap"] == 2);

  json basis;
  basis["field"] = "Q";
  basis["vectors"] = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      basis["vectors"].push_back(matrix_to_json(Matrix::unit(2, 2, i, j, FieldSpec::rationals())));
  std::ofstream("cli_basis.json") << basis.dump();
  Run c = run({"construct", "cli_basis.json", "--format", "json"});
  CHECK(c.code == 0);
  json cj = json::parse(c.out);
  CHECK(cj["invertible"] == true);
  CHECK(cj["image_ranks"] == json::array({1, 1, 1, 1}));
  remove("cli_fam.json");
  remove("cli_basis.json");
}

TEST_CASE("search commands are deterministic for a fixed seed") {
  Run t1 = run({"search", "tame", "--n", "2", "--format", "json", "--seed", "3"});
  Run t2 = run({"search", "tame", "--n", "2", "--format", "json", "--seed", "3"});
  CHECK(t1.code == 0);
  CHECK(t1.out == t2.out);

  json q;
  q["field"] = "Q";
  q["A"] = {{"ambient", {2, 2}}, {"basis", json::array()}};
  q["B"] = {{"ambient", {2, 2}}, {"basis", json::array()}};
  std::ofstream("cli_q.json") << q.dump();
  Run m1 = run({"search", "maxrank", "cli_q.json", "--budget", "4", "--seed", "9", "--format",
                "json"});
  Run m2 = run({"search", "maxrank", "cli_q.json", "--budget", "4", "--seed", "9", "--format",
                "json"});
  CHECK(m1.code == 0);
  CHECK(m1.out == m2.out);
  CHECK(json::parse(m1.out)["best"] == 8);
  remove("cli_q.json");

  json fam;
  fam["field"] = "F5";
  fam["vectors"] = json::array();
  Decomposition d = strassen(FieldSpec::prime(5));
  fam["vectors"].push_back(matrix_to_json(d.terms[1].factors[0]));
  fam["vectors"].push_back(matrix_to_json(d.terms[2].factors[0]));
  std::ofstream("cli_combo.json") << fam.dump();
  Run c1 = run({"search", "invertible-combo", "cli_combo.json", "--prefix", "1", "--seed", "4",
                "--format", "json"});
  Run c2 = run({"search", "invertible-combo", "cli_combo.json", "--prefix", "1", "--seed", "4",
                "--format", "json"});
  CHECK(c1.code == 0);
  CHECK(c1.out == c2.out);
  CHECK(json::parse(c1.out)["found"] == true);
  remove("cli_combo.json");
}

TEST_CASE("biased-dim command") {
  json in;
  in["D"] = json::array({json::array({"1", "0"}), json::array({"0", "2"})});
  in["S1"] = {{"ambient", {2, 1}},
              {"basis", json::array({json::array({json::array({"1"}), json::array({"0"})})})}};
  in["S2"] = {{"ambient", {2, 1}},
              {"basis", json::array({json::array({json::array({"1"}), json::array({"1"})})})}};
  std::ofstream("cli_bd.json") << in.dump();
  Run r = run({"biased-dim", "cli_bd.json", "--format", "json"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["modularity_defect"] == "-1/2");  // (1-lambda)/2 at lambda = 2
  remove("cli_bd.json");
}

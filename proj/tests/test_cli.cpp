#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#ifndef MRLREG_BINARY
#error "MRLREG_BINARY must be defined"
#endif

namespace {

int run_raw(const std::string& args) {
  const std::string cmd = std::string(MRLREG_BINARY) + " " + args;
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

int run(const std::string& args) {
  return run_raw(args + " > cli_stdout.txt 2>&1");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("simulate writes datasets of the requested size") {
  CHECK(run("simulate --population two-group-1 --seed 3 --out cli_tg1.csv "
            "--truth-out cli_truth.csv") == 0);
  CHECK(line_count("cli_tg1.csv") == 351);  // header + 250 + 100
  CHECK(line_count("cli_truth.csv") > 10);
  CHECK(run("simulate --population covariate --n 40 --seed 3 --out "
            "cli_cov.csv") == 0);
  CHECK(line_count("cli_cov.csv") == 41);
  CHECK(run("simulate --population two-group-2 --n-c 30 --n-t 20 --seed 4 "
            "--censor-uniform 0 30 --out cli_tg2.csv") == 0);
  CHECK(line_count("cli_tg2.csv") == 51);
}

TEST_CASE("unknown population or model is a usage error") {
  CHECK(run("simulate --population nope --out cli_x.csv") == 2);
  CHECK(run("simulate --out cli_x.csv --population") == 2);
  CHECK(run("fit --data cli_tg1.csv --model nope --out cli_x.jsonl") == 2);
  CHECK(run("nonsense-subcommand") == 2);
}

TEST_CASE("fit runs are deterministic given a seed") {
  REQUIRE(run("simulate --population two-group-1 --n-c 40 --n-t 30 --seed 5 "
              "--out cli_fit_data.csv") == 0);
  const std::string fit_args =
      "fit --data cli_fit_data.csv --model ddpmm --L 10 --iterations 300 "
      "--burn-in 100 --thinning 2 --seed 11 --out ";
  REQUIRE(run(fit_args + "cli_chain_a.jsonl") == 0);
  REQUIRE(run(fit_args + "cli_chain_b.jsonl") == 0);
  const std::string a = slurp("cli_chain_a.jsonl");
  REQUIRE(a.size() > 1000);
  CHECK(a == slurp("cli_chain_b.jsonl"));
  // a different seed changes the draws
  REQUIRE(run("fit --data cli_fit_data.csv --model ddpmm --L 10 --iterations "
              "300 --burn-in 100 --thinning 2 --seed 12 --out "
              "cli_chain_c.jsonl") == 0);
  CHECK(a != slurp("cli_chain_c.jsonl"));
}

TEST_CASE("fit writes a diagnostics file on request") {
  REQUIRE(run("fit --data cli_fit_data.csv --model dpmm --L 8 --iterations "
              "200 --burn-in 50 --thinning 1 --seed 13 --out cli_dpmm.jsonl "
              "--diagnostics cli_diag.json") == 0);
  const std::string d = slurp("cli_diag.json");
  CHECK(d.find("accept") != std::string::npos);
  CHECK(d.find("ess") != std::string::npos);
}

TEST_CASE("functionals produce a curve csv from a chain") {
  REQUIRE(run("functionals --chain cli_chain_a.jsonl --kind mrl --group C "
              "--t-min 0.5 --t-max 20 --t-points 25 --out cli_mrl.csv") == 0);
  std::ifstream in("cli_mrl.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "grid,mean,q0.025,q0.5,q0.975,n_valid");
  CHECK(line_count("cli_mrl.csv") == 26);
  REQUIRE(run("functionals --chain cli_chain_a.jsonl --kind prob-mrl-order "
              "--t-min 1 --t-max 10 --t-points 10 --out cli_pmo.csv") == 0);
  CHECK(line_count("cli_pmo.csv") == 11);
}

TEST_CASE("compare rejects a chain fit to different data") {
  REQUIRE(run("simulate --population two-group-1 --n-c 40 --n-t 30 --seed 6 "
              "--out cli_other_data.csv") == 0);
  CHECK(run("compare --data cli_other_data.csv --chain cli_chain_a.jsonl "
            "--out-prefix cli_cmp_bad") == 3);
}

TEST_CASE("compare emits per-chain CPO tables and summaries") {
  REQUIRE(run("fit --data cli_fit_data.csv --model ewm --iterations 400 "
              "--burn-in 100 --thinning 2 --seed 15 --out cli_ewm.jsonl") == 0);
  CHECK(run("compare --data cli_fit_data.csv --chain cli_chain_a.jsonl "
            "--chain cli_ewm.jsonl --out-prefix cli_cmp") == 0);
  CHECK(line_count("cli_cmp_0.csv") == 71);  // header + 70 rows
  CHECK(line_count("cli_cmp_1.csv") == 71);
  const std::string s = slurp("cli_cmp_summary.json");
  CHECK(s.find("ddpmm") != std::string::npos);
  CHECK(s.find("ewm") != std::string::npos);
  CHECK(s.find("alpml_weighted") != std::string::npos);
}

TEST_CASE("properties prints the analytic-vs-simulation table") {
  REQUIRE(run_raw("properties --alpha 1 --b 0.5 --level 2 --mc 200000 "
                  "--trunc-level 200 --seed 7 > cli_props.csv 2>&1") == 0);
  std::ifstream in("cli_props.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "formula,alpha,b,analytic,mc_estimate,mc_se,pass");
  int rows = 0, passes = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    if (line.size() >= 5 && line.substr(line.size() - 5) == ",pass") ++passes;
  }
  CHECK(rows == 8);
  CHECK(passes == 8);
  // cor_zeta row carries the closed form 1/3
  const std::string all = slurp("cli_props.csv");
  CHECK(all.find("cor_zeta") != std::string::npos);
  CHECK(all.find("0.33333333333333") != std::string::npos);
}

TEST_CASE("cleanup") {
  for (const char* f :
       {"cli_tg1.csv", "cli_truth.csv", "cli_cov.csv", "cli_tg2.csv",
        "cli_fit_data.csv", "cli_chain_a.jsonl", "cli_chain_b.jsonl",
        "cli_chain_c.jsonl", "cli_dpmm.jsonl", "cli_diag.json", "cli_mrl.csv",
        "cli_pmo.csv", "cli_other_data.csv", "cli_ewm.jsonl", "cli_cmp_0.csv",
        "cli_cmp_1.csv", "cli_cmp_summary.json",
        "cli_props.csv", "cli_stdout.txt", "cli_x.csv", "cli_x.jsonl"})
    std::remove(f);
  CHECK(true);
}

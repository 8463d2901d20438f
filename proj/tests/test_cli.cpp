// Copyright 2026 The Lexparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include "cli_runner.hpp"

using lexparse::testing::CliRunner;

namespace {

const char* kSmall =
    "--set d_word=8 --set d_pos=8 --set d_slot=8 --set d_model=8 --set n_layers=1 "
    "--set n_heads=2 --set d_ff=16";

}  // namespace

TEST_CASE("end-to-end flow through the command line") {
  CliRunner cli(LEXPARSE_CLI, "lexparse-cli");
  auto ok = [&](const std::string& args) {
    auto r = cli.run(args);
    INFO(args);
    INFO(cli.last_stderr());
    REQUIRE(r.status == 0);
    return r.out;
  };

  ok("prep --out-dir data --train-size 60 --dev-size 20 --test-size 20 --seed 4");
  const std::string lex_out = ok("lexicon build --train data/train.txt --out lex.tsv");
  CHECK(lex_out.find("categories=") != std::string::npos);
  const std::string disamb_out =
      ok("disamb train --train data/train.txt --heldout data/dev.txt --lexicon lex.tsv "
         "--out disamb.ckpt --epochs 1 " + std::string(kSmall));
  CHECK(disamb_out.find("resolved config") != std::string::npos);

  const std::string train_args =
      "train --train data/train.txt --dev data/dev.txt --lexicon lex.tsv --disamb disamb.ckpt "
      "--mode lex-gr --filter model --epochs 2 --set d_hidden=8 " + std::string(kSmall);
  const std::string t1 = ok(train_args + " --out a.ckpt");
  const std::string t2 = ok(train_args + " --out b.ckpt");
  CHECK(t1.find("mode=lex-gr") != std::string::npos);
  CHECK(CliRunner::read(cli.path("a.ckpt")) == CliRunner::read(cli.path("b.ckpt")));

  ok("parse --model a.ckpt --input data/test.txt --lexicon lex.tsv --disamb disamb.ckpt "
     "--filter model --output pred.txt");
  const std::string report = ok("eval --pred pred.txt --gold data/test.txt --kv");
  CHECK(report.find("exact_match=") != std::string::npos);
  const std::string self = ok("eval --pred data/test.txt --gold data/test.txt --kv");
  CHECK(self.find("exact_match=1.0") != std::string::npos);

  const std::string gen = ok("simulate generate --test data/test.txt --catalog data/catalog.tsv "
                             "--p-replace 1 --out mod.txt --log mod.tsv");
  CHECK(gen.find("modified_utterances=") != std::string::npos);
  const std::string run =
      ok("simulate run --model a.ckpt --test mod.txt --lexicon lex.tsv --catalog data/catalog.tsv "
         "--disamb disamb.ckpt --scenario updated --filter model");
  CHECK(run.find("exact_match=") != std::string::npos);
}

TEST_CASE("errors exit with status one and name the line") {
  CliRunner cli(LEXPARSE_CLI, "lexparse-cli-err");
  std::string text;
  for (int i = 1; i <= 16; ++i) text += "[IN:GET_X go to [SL:Y home ] ]\n";
  text += "[IN:GET_X go to [SL:Y home ]\n";
  cli.write("bad.txt", text);
  auto r = cli.run("lexicon build --train bad.txt --out lex.tsv");
  CHECK(r.status == 1);
  CHECK(cli.last_stderr().find("line 17") != std::string::npos);
  CHECK(cli.run("eval --pred bad.txt").status != 0);
  CHECK(cli.run("train --train bad.txt --out x.ckpt --mode nonsense").status == 1);
}

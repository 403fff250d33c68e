#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("banach-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = "cd '" + scratch().string() + "' && BANACH_CACHE_DIR='" +
                          (scratch() / "cache").string() + "' '" BANACH_CLI "' " + args + " > '" +
                          out.string() + "' 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("norm") {
    write(scratch() / "e2e3.vec", "2 1\n3 1\n");
    write(scratch() / "e123.vec", "1 1\n2 1\n3 1\n");
    CHECK(run("norm --space t --input e2e3.vec").out == "1/1\n");
    CHECK(run("norm --space tstar --input e2e3.vec").out == "2/1\n");
    CHECK(run("norm --space l1 --input e123.vec").out == "3/1\n");
    CHECK(run("norm --space linf --input e123.vec").out == "1/1\n");
    CHECK(run("norm --space l2 --dim 4 --input e123.vec").out.rfind("sqrt(3/1)\nin [", 0) == 0);
    CHECK(run("norm --space james:l1 --input e123.vec").out == "3/1\n");
    const Run verified = run("norm --space tstar --input e2e3.vec --verify");
    CHECK(verified.code == 0);
    CHECK(verified.out.rfind("2/1\npacking 2/1\nvalue 2/1\n", 0) == 0);
  }

  TEST_CASE("norm errors") {
    write(scratch() / "bad.vec", "2 1\n1 1\n");
    CHECK(run("norm --space t --input bad.vec").code == 2);
    CHECK(run("norm --space t --dim 2 --input e123.vec").code == 2);
    CHECK(run("norm --space l9 --input e123.vec").code == 2);
    CHECK(run("norm --space t").code == 2);
    CHECK(run("norm --space tstar --dim 14 --input e123.vec").code == 3);
    CHECK(run("bogus").code == 2);
  }

  TEST_CASE("concentrate and interlaced") {
    write(scratch() / "sweep.cfg",
          "spaces = l1, tstar\nk_range = 2..3\nground = k..k+5\nsubset_size = 2k\nmode = both\n");
    const Run a = run("--no-timing concentrate --config sweep.cfg");
    const Run b = run("--no-timing concentrate --config sweep.cfg");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms\n"
                      "l1,2,\"{2,3,4,5,6,7}\",4,exact,1/1,2/1,2/1,\"{2,3,4,5}\",\n",
                      0) == 0);
    CHECK(run("--no-timing concentrate --config sweep.cfg --output sweep.csv").out.empty());
    CHECK(slurp(scratch() / "sweep.csv") == a.out);

    const Run i = run("--no-timing interlaced --config sweep.cfg");
    CHECK(i.code == 0);
    CHECK(i.out.find("l1,3,\"{3,4,5,6,7,8}\",6,interlaced,1/1,3/1,3/1,\"{3,5,7}|{4,6,8}\",\n") !=
          std::string::npos);

    write(scratch() / "small.cfg", "spaces = l1\nk_range = 2..3\nground = 1..8\nsubset_size = 1\n");
    CHECK(run("concentrate --config small.cfg").code == 2);
    write(scratch() / "huge.cfg",
          "spaces = l1\nk_range = 2..2\nground = 1..30\nsubset_size = 15\nmax_subsets = 1000\n");
    CHECK(run("concentrate --config huge.cfg").code == 3);
    CHECK(run("concentrate --config missing.cfg").code == 2);
  }

  TEST_CASE("cache") {
    CHECK(run("cache build --dim 6").code == 0);
    CHECK(fs::exists(scratch() / "cache" / "normset-1-6-prune.txt"));
    const Run inspect = run("cache inspect --dim 6");
    CHECK(inspect.code == 0);
    CHECK(inspect.out.find("count ") != std::string::npos);
    CHECK(inspect.out.find("depth 0 6\n") != std::string::npos);
    CHECK(run("cache verify --dim 6").code == 0);

    CHECK(run("cache build --dim 6 --file t6.txt").code == 0);
    std::string text = slurp(scratch() / "t6.txt");
    text.replace(text.rfind("1/2"), 3, "1/1");
    write(scratch() / "t6.txt", text);
    CHECK(run("cache verify --dim 6 --file t6.txt").code == 4);
    CHECK(run("cache verify --dim 7 --file missing.txt").code == 2);
    CHECK(run("cache build --dim 12").code == 3);
  }

  TEST_CASE("map and moduli") {
    const Run m = run("map --space l1 --ground 1..4 --k 2 --output m.txt");
    CHECK(m.code == 0);
    const std::string text = slurp(scratch() / "m.txt");
    CHECK(text.rfind("k=2 metric=hamming codomain=l1 ground={1,2,3,4}\n{1,2} -> 1:1/2 2:1/2\n", 0) ==
          0);
    const Run mod = run("moduli --map m.txt --theta 1 --pairs-csv pairs.csv");
    CHECK(mod.code == 0);
    CHECK(mod.out ==
          "lipschitz 1/1\n"
          "t 0/1 rho 0/1 omega 0/1\n"
          "t 1/1 rho 1/1 omega 1/1\n"
          "t 2/1 rho 1/1 omega 2/1\n"
          "coarse theta 1 c1 1/2 c2 1/1\n");
    CHECK(slurp(scratch() / "pairs.csv").rfind("pair,d_domain,d_codomain,ratio\n", 0) == 0);
    CHECK(run("map --space tstar --ground 3..8 --k 2").code == 0);
    CHECK(run("map --space l1 --ground 1..4 --k 5").code == 2);
    write(scratch() / "broken.txt", "k=2 metric=hamming codomain=l1 ground={1,2,3}\n{1,2} -> 1:1\n");
    CHECK(run("moduli --map broken.txt").code == 2);
  }

  TEST_CASE("determinism of every command") {
    const char* commands[] = {
        "--no-timing norm --space tstar --input e2e3.vec --verify",
        "--no-timing concentrate --config sweep.cfg",
        "--no-timing interlaced --config sweep.cfg",
        "--no-timing cache inspect --dim 6",
        "--no-timing cache verify --dim 6",
        "--no-timing map --space tstar --ground 3..8 --k 2",
        "--no-timing moduli --map m.txt",
    };
    for (const char* c : commands) {
      const Run a = run(c);
      const Run b = run(c);
      CHECK_MESSAGE(a.out == b.out, c);
      CHECK(a.code == 0);
    }
  }
}

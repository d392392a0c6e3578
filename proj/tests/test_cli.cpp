#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hessdamp_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Outcome cli(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" HESSDAMP_CLI_PATH "' " + args +
                          " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(cli("--help").code == 0);
  CHECK(cli("opt --help").code == 0);
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("opt --problem example51").code == 2);
  CHECK(cli("opt --problem nowhere --x0 1").code == 2);
  CHECK(cli("opt --problem example51 --algo sgd --x0 1").code == 2);
  CHECK(cli("opt --problem example51 --x0 1 --perturb power:c0=1").code == 2);
  CHECK(cli("exp fig99").code == 2);
}

TEST_CASE("check") {
  const Outcome a = cli("check --problem example51 --samples 2000 --csv assumptions.csv");
  CHECK(a.code == 0);
  CHECK(a.out.find("QuadGrowth") != std::string::npos);
  CHECK(slurp(workdir() / "assumptions.csv").rfind("assumption,samples,violations", 0) == 0);

  CHECK(cli("check --problem example52 --box -3,3 --theorem T42 --alpha 0.4 --beta 0.15").code ==
        0);
  CHECK(cli("check --problem example51 --theorem T41 --alpha 0.3 --beta 0.01").code == 1);
  CHECK(cli("check --problem example51 --theorem T99").code == 2);
}

TEST_CASE("opt") {
  const Outcome a = cli("opt --problem example51 --algo iaa --alpha 0.3 --beta 0.2 --x0 3 "
                        "--out iaa.csv");
  CHECK(a.code == 0);
  CHECK(a.out.find("14") != std::string::npos);
  const std::string csv = slurp(workdir() / "iaa.csv");
  CHECK(csv.find("k,x,value_error,grad_norm,dist,step,energy,n_grad_evals") != std::string::npos);

  const Outcome w = cli("opt --problem example51 --algo iaa --alpha 0.3 --beta 0.01 --x0 3");
  CHECK(w.code == 0);
  CHECK(w.err.find("warning") != std::string::npos);

  CHECK(cli("opt --problem example51 --algo hbm --alpha 0.7 --beta 5 --x0 3 --tol none "
            "--max-iter 10000")
            .code == 3);
  CHECK(cli("opt --problem example52 --algo nag-h --alpha 0.7 --beta 0.04 --theta 0.05 "
            "--x0 3,3 --perturb gauss:sigma0=0.001,decay=0.01 --seed 4 --tol none --max-iter 200")
            .code == 0);
}

TEST_CASE("ode") {
  const Outcome a = cli("ode --problem example51 --alpha 1 --beta 0.1 --x0 3 --t-end 5 "
                        "--record-every 100 --out traj.csv");
  CHECK(a.code == 0);
  CHECK(slurp(workdir() / "traj.csv").find("t,x,v,value_error,traj_error,speed,energy") !=
        std::string::npos);
  CHECK(cli("ode --problem example51 --alpha 1 --beta 0.1 --x0 3 --t0 1 --t-end 20 "
            "--perturb power:c0=0.1,p=1,dir=e1")
            .code == 0);
  CHECK(cli("ode --problem example51 --alpha 1 --beta 0.1 --x0 3 --dt 0").code == 2);
  CHECK(cli("ode --problem example51 --alpha -8 --beta 0.1 --x0 3").code == 2);
  // RK4 is unstable at this step size.
  CHECK(cli("ode --problem example51 --alpha 1 --beta 0.1 --x0 3 --t-end 1000 --dt 5").code == 3);
}

TEST_CASE("rate") {
  REQUIRE(cli("opt --problem example51 --algo iaa --alpha 0.3 --beta 0.2 --x0 3 --tol none "
              "--max-iter 12 --out short.csv")
              .code == 0);
  const Outcome a = cli("rate --in short.csv --kind exp --window 1");
  CHECK(a.code == 0);
  CHECK(a.out.find("exponential") != std::string::npos);
  CHECK(cli("rate --in short.csv --kind exp --window 1 --min-rate 1e6").code == 1);
  CHECK(cli("rate --in short.csv --column nope").code == 2);
  CHECK(cli("rate --in missing.csv").code == 2);
}

TEST_CASE("exp") {
  const Outcome a = cli("--out-dir fig12 exp fig12");
  CHECK(a.code == 0);
  CHECK(a.out.find("ordering: iaa") != std::string::npos);
  CHECK(fs::exists(workdir() / "fig12" / "summary.txt"));
  CHECK(fs::exists(workdir() / "fig12" / "checks.txt"));

  {
    std::ofstream ini(workdir() / "mine.ini");
    ini << "[experiment]\nname = mine\nproblem = example51\nemit = summary\n\n"
           "[run:iaa]\nalgo = iaa\nalpha = 0.3\nbeta = 0.2\nx0 = 3\n";
  }
  const Outcome b = cli("--quiet exp mine.ini");
  CHECK(b.code == 0);
  CHECK(b.out.empty());
  CHECK(fs::exists(workdir() / "mine" / "summary.txt"));
  CHECK_FALSE(fs::exists(workdir() / "mine" / "iaa_seed0.csv"));

  const Outcome c = cli("--out-dir fig45 exp fig45 --seeds 1..2");
  CHECK(c.code == 0);
  CHECK(fs::exists(workdir() / "fig45" / "iaa-per_seed2.csv"));
  CHECK_FALSE(fs::exists(workdir() / "fig45" / "iaa-per_seed3.csv"));
}

// End-to-end runs of the command-line tool: exit codes, output files and
// determinism.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kData = EXTCALC_DATA_DIR;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("extcalc_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    int run(const std::string& args) const {
        const std::string cmd = "EXTCALC_OUT_DIR='" + dir.string() + "' '" EXTCALC_CLI "' " + args + " > '" +
                                (dir / "stdout.txt").string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    std::string read(const std::string& name) const {
        std::ifstream in(dir / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
};

}  // namespace

TEST(Cli, UsageErrors) {
    Sandbox s;
    EXPECT_EQ(s.run("no-such-command"), 2);
    EXPECT_EQ(s.run(""), 2);
    EXPECT_EQ(s.run("mesh-info"), 2);
    EXPECT_EQ(s.run("demo no-such-demo"), 2);
    EXPECT_EQ(s.run("--help"), 0);
}

TEST(Cli, ParseErrors) {
    Sandbox s;
    s.write("bad.mesh", "dim 2\nvertices 3\n0 0\n1 0\n");
    EXPECT_EQ(s.run("mesh-info '" + (s.dir / "bad.mesh").string() + "'"), 3);
    EXPECT_NE(s.read("stderr.txt").find("line"), std::string::npos);
    s.write("bad.cfg", "kind = static-e\ncells = 4 4 4\ncharge = 1 1\n");
    EXPECT_EQ(s.run("maxwell-static-e '" + (s.dir / "bad.cfg").string() + "'"), 3);
    EXPECT_EQ(s.run("hodge --form 'garbage' --metric 'diag(1,1)'"), 3);
}

TEST(Cli, MeshInfoAndCohomology) {
    Sandbox s;
    EXPECT_EQ(s.run("mesh-info " + kData + "/mobius.mesh"), 0);
    EXPECT_NE(s.read("stdout.txt").find("orientable no"), std::string::npos);
    EXPECT_EQ(s.run("cohomology " + kData + "/torus.mesh --expect 1,2,1"), 0);
    EXPECT_TRUE(fs::exists(s.dir / "torus_cohomology.csv"));
    EXPECT_EQ(s.run("cohomology " + kData + "/torus.mesh --expect 1,1,1"), 1);
    EXPECT_EQ(s.run("cohomology " + kData + "/sphere.mesh --expect 1,0,1"), 0);
}

TEST(Cli, IntegrationAndStokes) {
    Sandbox s;
    EXPECT_EQ(s.run("integrate " + kData + "/mobius.mesh " + kData + "/mobius_area_twisted.csv"), 0);
    EXPECT_EQ(s.run("integrate " + kData + "/mobius.mesh " + kData + "/mobius_area_straight.csv"), 1);
    EXPECT_NE(s.read("stderr.txt").find("twisted"), std::string::npos);
    EXPECT_EQ(s.run("stokes-check " + kData + "/disk.mesh " + kData + "/disk_minus7.csv"), 0);
    EXPECT_TRUE(fs::exists(s.dir / "disk_minus7_d.csv"));
}

TEST(Cli, HodgeAndLorentz) {
    Sandbox s;
    EXPECT_EQ(s.run("hodge --form 'n=3 p=1; [0]: 1' --metric 'diag(1,1,1)'"), 0);
    EXPECT_EQ(s.run("lorentz --charge 2 --velocity 1 0 0 0 --field 'n=4 p=2; [1,0]: 3'"), 0);
    EXPECT_EQ(s.run("lorentz --charge 2 --velocity 2 0 0 0 --field 'n=4 p=2; [1,0]: 3'"), 1);
}

TEST(Cli, DemosAndScenarios) {
    Sandbox s;
    EXPECT_EQ(s.run("demo list"), 0);
    EXPECT_EQ(s.run("demo stokes-disk-minus7"), 0);
    EXPECT_NE(s.read("stdout.txt").find("PASS"), std::string::npos);
    EXPECT_EQ(s.run("maxwell-static-e " + kData + "/point_charge.cfg --svg"), 0);
    EXPECT_TRUE(fs::exists(s.dir / "point_charge.csv"));
    EXPECT_TRUE(fs::exists(s.dir / "point_charge.svg"));
    EXPECT_EQ(s.run("maxwell-static-b " + kData + "/wire.cfg"), 0);
}

TEST(Cli, CsvOutputIsDeterministic) {
    Sandbox s;
    ASSERT_EQ(s.run("maxwell-evolve " + kData + "/moving_charge.cfg"), 0);
    const std::string first = s.read("moving_charge.csv");
    ASSERT_EQ(s.run("maxwell-evolve " + kData + "/moving_charge.cfg"), 0);
    EXPECT_EQ(first, s.read("moving_charge.csv"));
    EXPECT_FALSE(first.empty());
}

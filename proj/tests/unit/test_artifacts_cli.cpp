#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "horizonlab/artifacts.hpp"
#include "horizonlab/cli.hpp"

using namespace horizonlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("horizonlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

}  // namespace

TEST(Artifacts, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Artifacts, TableFormats) {
    const Table t{{"a", "b"}, {{1.0, 0.5}, {2.0, 0.1}}};
    EXPECT_EQ(t.to_csv(), "a,b\n1,0.5\n2,0.1\n");
    EXPECT_NE(t.to_json().find("\"columns\""), std::string::npos);
    EXPECT_THROW(ArtifactSet(scratch("fmt"), "xml"), Error);
}

TEST(Artifacts, ManifestVerifiesAndDetectsTampering) {
    const fs::path dir = scratch("manifest");
    ArtifactSet a(dir, "csv");
    a.add_table("t", Table{{"x"}, {{1.0}}});
    a.add_text("sub/report.json", "{}\n");
    a.commit({"test", "none", "ok", std::nullopt, ""});
    const ManifestCheck ok = verify_manifest(dir);
    EXPECT_TRUE(ok.ok) << ok.problem;
    EXPECT_EQ(ok.files, 3u);  // t.csv, sub/report.json, run.log
    std::ofstream(dir / "t.csv") << "x\n2\n";
    EXPECT_FALSE(verify_manifest(dir).ok);
}

TEST(Cli, ValidateBadConfigExitsOneWithoutArtifacts) {
    const fs::path dir = scratch("bad");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.ini") << "[grid]\nr_min = -1\n";
    const fs::path out = dir / "out";
    EXPECT_EQ(cli({"validate", (dir / "bad.ini").string()}), kExitValidation);
    EXPECT_EQ(cli({"horizon", (dir / "bad.ini").string(), "--out", out.string()}), kExitValidation);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, HorizonReportForWhiteHole) {
    const fs::path out = scratch("horizon");
    std::string text;
    ASSERT_EQ(cli({"horizon", "example1_vortex", "--out", out.string()}, &text), kExitOk) << text;
    const std::string report = slurp(out / "horizon_report.json");
    EXPECT_NE(report.find("WhiteHole"), std::string::npos);
    EXPECT_TRUE(verify_manifest(out).ok);
}

TEST(Cli, NumericalFailureRecordsError) {
    const fs::path out = scratch("numfail");
    ASSERT_EQ(cli({"ergosphere", "slow_medium_gradient", "--out", out.string()}), kExitValidation);
    const fs::path dir = scratch("numfail_cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "c.ini") << "[scenario]\nname = no_ergo\n[metric]\nfamily = vortex\nA = 1\nB = 1\n"
                                    "domain_r_min = 0.25\n[grid]\nr_min = 0.5\nr_max = 3\n"
                                    "[horizon_search]\nergo_r_lo = 2\nergo_r_hi = 3\n";
    EXPECT_EQ(cli({"ergosphere", (dir / "c.ini").string(), "--out", out.string()}), kExitNumerical);
    const std::string manifest = slurp(out / "manifest.json");
    EXPECT_NE(manifest.find("numerical_failure"), std::string::npos);
    EXPECT_NE(manifest.find("NoSignChange"), std::string::npos);
    EXPECT_TRUE(verify_manifest(out).ok);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ASSERT_EQ(cli({"classify", "example1_drain", "--out", a.string(), "--format", "json"}), kExitOk);
    ASSERT_EQ(cli({"classify", "example1_drain", "--out", b.string(), "--format", "json"}), kExitOk);
    for (const auto& entry : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
    }
}

TEST(Cli, ListAndUsage) {
    std::string text;
    EXPECT_EQ(cli({"list-scenarios"}, &text), kExitOk);
    EXPECT_NE(text.find("nonuniqueness_blackhole"), std::string::npos);
    EXPECT_EQ(cli({"frobnicate"}), kExitValidation);
    EXPECT_EQ(cli({"horizon", "example1_vortex", "--format", "xml"}), kExitValidation);
}

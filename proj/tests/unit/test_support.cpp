// io, expression, generators, verify plumbing
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include <besovlab/error.hpp>
#include <besovlab/expression.hpp>
#include <besovlab/generators.hpp>
#include <besovlab/io.hpp>
#include <besovlab/parallel.hpp>
#include <besovlab/verify.hpp>

using namespace besovlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path temp_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "besovlab_unit";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Format, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(std::stod(format_double(kPi)), kPi);
}

TEST(Csv, Rfc4180Escaping) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(csv_row({"x", "1,2", ""}), "x,\"1,2\",");
}

TEST(Hash, Fnv1aKnownValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Snapshot, RoundTripIsBitExact) {
    const SampledField f = singular_field(DomainGeometry::l_shape(), 6);
    const std::string path = temp_path("snap.psnp").string();
    write_snapshot(path, f, 0.125);
    const Snapshot s = read_snapshot(path);
    EXPECT_EQ(s.t, 0.125);
    ASSERT_EQ(s.field.level(), 6);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(s.field.values()[i], f.values()[i]);
    EXPECT_EQ(fnv1a64_file(path), fnv1a64_file(path));
}

TEST(Snapshot, RejectsBadMagicAndTruncation) {
    const std::string path = temp_path("bad.psnp").string();
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE0000";
    }
    EXPECT_THROW(read_snapshot(path), Error);
    {
        std::ofstream out(path, std::ios::binary);
        out.write("PSNP\x05\x00\x00\x00", 8);
    }
    EXPECT_THROW(read_snapshot(path), Error);
    EXPECT_THROW(read_snapshot(temp_path("missing.psnp").string()), Error);
}

TEST(CoeffIo, CsvAndBinary) {
    CoeffTree t(2, 4, 4);
    t.set_father(0.5);
    t.set({2, {1, 3}, 2}, -1.25);
    std::ostringstream csv;
    write_coeff_csv(csv, t);
    const std::string text = csv.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "level,j_k1,j_k2,type,coeff");
    EXPECT_NE(text.find("2,1,3,2,-1.25"), std::string::npos);

    const std::string path = temp_path("tree.ctre").string();
    write_coeff_binary(path, t);
    const CoeffTree r = read_coeff_binary(path);
    EXPECT_EQ(r.max_level(), 4);
    EXPECT_EQ(r.father(), 0.5);
    EXPECT_EQ(r.get({2, {1, 3}, 2}), -1.25);
    EXPECT_EQ(r.sum_squares(), t.sum_squares());
}

TEST(Expression, ArithmeticAndFunctions) {
    EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0), 7.0);
    EXPECT_DOUBLE_EQ(Expression::parse("2 ^ 3 ^ 2")(0), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("-x^2")(3.0), -9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("t * sin(pi * x) * sin(pi * y)")(0.5, 0.5, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(Expression::parse("max(x, y) + min(x, y) + pow(2, t)")(1, 4, 3), 13.0);
    EXPECT_DOUBLE_EQ(Expression::parse("exp(0) + log(e) + sqrt(16) + abs(-2)")(0), 8.0);
    EXPECT_EQ(Expression::parse("x + y").text(), "x + y");
}

TEST(Expression, ParseErrors) {
    for (const char* bad : {"", "1 +", "sin(", "foo(1)", "1 2", "z", "(1"}) {
        try {
            Expression::parse(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), "bad-params") << bad;
        }
    }
}

TEST(Generators, BumpPeaksAtCentre) {
    const SampledField b = bump_field({}, 6, {0.5 + 1.0 / 128, 0.5 + 1.0 / 128}, 0.25);
    EXPECT_EQ(*std::max_element(b.values().begin(), b.values().end()), 1.0);
    EXPECT_EQ(b(32, 32), 1.0);
    EXPECT_EQ(b(0, 0), 0.0);
}

TEST(Generators, SingularFieldVanishesOnWedgeEdges) {
    const auto w = DomainGeometry::wedge(1.5 * kPi);
    const CornerFrame cf = corner_frame(w);
    EXPECT_NEAR(cf.opening, 1.5 * kPi, 1e-15);
    const double lambda = 2.0 / 3.0;
    const SampledField f = singular_field(w, 7, lambda, false);
    double max = 0.0;
    std::size_t edge_cells = 0;
    for (std::size_t iy = 0; iy < f.n(); ++iy) {
        for (std::size_t ix = 0; ix < f.n(); ++ix) {
            const Point c = f.center(ix, iy);
            max = std::max(max, std::abs(f(ix, iy)));
            if (!f.inside(ix, iy)) {
                EXPECT_EQ(f(ix, iy), 0.0);
                continue;
            }
            // centres half a cell off an edge: |sin(lambda phi)| <= lambda (h/2) / r
            const double r = std::hypot(c.x, c.y);
            if ((std::abs(c.y) < f.h() && c.x > 0) || (std::abs(c.x) < f.h() && c.y < 0)) {
                EXPECT_LE(std::abs(f(ix, iy)), std::pow(r, lambda) * lambda * f.h() / r);
                ++edge_cells;
            }
        }
    }
    EXPECT_GT(max, 0.5);
    EXPECT_EQ(edge_cells, 2 * 64u);
}

TEST(Generators, ManufacturedProfileLaplacian) {
    const Point c{0.25, 0.25};
    const double R = 0.2, h = 1e-4;
    for (const Point p : {Point{0.3, 0.2}, Point{0.25, 0.35}, Point{0.1, 0.25}}) {
        const double lap = (manufactured_profile({p.x + h, p.y}, c, R) + manufactured_profile({p.x - h, p.y}, c, R) +
                            manufactured_profile({p.x, p.y + h}, c, R) + manufactured_profile({p.x, p.y - h}, c, R) -
                            4.0 * manufactured_profile(p, c, R)) /
                           (h * h);
        EXPECT_NEAR(manufactured_laplacian(p, c, R), lap, 1e-4 * std::max(1.0, std::abs(lap)));
    }
    EXPECT_EQ(manufactured_profile({0.9, 0.9}, c, R), 0.0);
    EXPECT_EQ(manufactured_profile(c, c, R), 1.0);
}

TEST(Generators, BoundaryLayer) {
    const auto sq = DomainGeometry::unit_square();
    const SampledField f = boundary_layer_field(sq, 5, 0.4);
    EXPECT_NEAR(f(0, 16), std::pow(1.0 / 64.0, 0.4), 1e-15);
    EXPECT_NEAR(f(15, 16), std::pow(0.5 - 1.0 / 64.0, 0.4), 1e-15);
}

TEST(Parallel, VisitsEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_GE(thread_count(), 1u);
}

TEST(Verify, PencilSuitePasses) {
    std::vector<int> seen;
    VerifyOptions opt;
    opt.on_result = [&](const CheckResult& c) { seen.push_back(c.criterion); };
    const SuiteReport r = verify_suite("pencil", opt);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(seen, (std::vector<int>{1, 2}));
    const std::string csv = suite_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "suite,criterion,name,passed,detail");
}

TEST(Verify, UnknownSuite) {
    try {
        verify_suite("everything");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "invalid-argument");
    }
    EXPECT_EQ(suite_names().size(), 5u);
}

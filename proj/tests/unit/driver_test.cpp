#include "xfem/driver.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sstream>
#include <string>

using namespace xfem;

namespace {

std::string expect_error(const std::string& text)
{
    try {
        parse_params(text);
    } catch (const Error& e) {
        return e.what();
    }
    ADD_FAILURE() << "no error for: " << text;
    return {};
}

Params short_run(int cycles)
{
    Params p;
    p.cycles = cycles;
    return p;
}

} // namespace

TEST(Params, SetLinesWithComments)
{
    const Params p = parse_params("set Using XFEM        =true\n"
                                  "set blending          =true\n"
                                  "set Number of Cycles  =6\n"
                                  "set q_points          =3\n");
    EXPECT_TRUE(p.use_xfem);
    EXPECT_TRUE(p.blending);
    EXPECT_EQ(p.cycles, 6);
    EXPECT_EQ(p.q_points, 3);
}

TEST(Params, EmptyFileGivesDefaults)
{
    const Params p = parse_params("");
    const Params d;
    EXPECT_EQ(p.use_xfem, d.use_xfem);
    EXPECT_EQ(p.blending, d.blending);
    EXPECT_EQ(p.cycles, 6);
    EXPECT_EQ(p.q_points, 3);
}

TEST(Params, WhitespaceCommentsAndPartialFiles)
{
    const Params p = parse_params("# comment\n\n  set   Number   of\tCycles = 4  \r\nset q_points=5\n");
    EXPECT_EQ(p.cycles, 4);
    EXPECT_EQ(p.q_points, 5);
    EXPECT_TRUE(p.blending);
}

TEST(Params, ModeSelection)
{
    Params p = parse_params("set blending =false\n");
    EXPECT_EQ(space_mode(p, ProblemKind::Weak), SpaceMode::WeakNoBlend);
    EXPECT_EQ(space_mode(p, ProblemKind::Strong), SpaceMode::Strong);
    p = parse_params("set Using XFEM = false\n");
    EXPECT_EQ(space_mode(p, ProblemKind::Weak), SpaceMode::XfemOff);
    EXPECT_EQ(space_mode(p, ProblemKind::Strong), SpaceMode::XfemOff);
    EXPECT_EQ(space_mode(Params{}, ProblemKind::Weak), SpaceMode::WeakBlend);
}

TEST(Params, ErrorsCarryLineNumbers)
{
    EXPECT_NE(expect_error("set q_points = 3\nset colour = red\n").find("line 2"), std::string::npos);
    EXPECT_NE(expect_error("set colour = red\n").find("unknown key"), std::string::npos);
    EXPECT_NE(expect_error("\nq_points = 3\n").find("line 2"), std::string::npos);
    EXPECT_NE(expect_error("set blending = maybe\n").find("line 1"), std::string::npos);
    EXPECT_NE(expect_error("set q_points = three\n").find("line 1"), std::string::npos);
    EXPECT_NE(expect_error("set q_points = 0\n").find("line 1"), std::string::npos);
    EXPECT_NE(expect_error("set Number of Cycles = 2x\n").find("line 1"), std::string::npos);
    EXPECT_NE(expect_error("set using xfem = true\n").find("unknown key"), std::string::npos);
}

TEST(Driver, ProblemNames)
{
    EXPECT_EQ(parse_problem_kind("weak"), ProblemKind::Weak);
    EXPECT_EQ(parse_problem_kind("strong"), ProblemKind::Strong);
    EXPECT_THROW(parse_problem_kind("medium"), Error);
}

TEST(Driver, WeakCycleZeroBlock)
{
    std::ostringstream out;
    run(short_run(2), ProblemKind::Weak, out, {false, "."});
    const std::string text = out.str();
    const std::regex block("Cycle 0:\n"
                           "   Number of active cells:       80\n"
                           "   Number of degrees of freedom: 161\n"
                           "   L2 error = [0-9.e+-]+\n"
                           "   energy error = [0-9.e+-]+\n"
                           "Cycle 1:\n"
                           "   Number of active cells:       320\n"
                           "   Number of degrees of freedom: 493\n");
    EXPECT_TRUE(std::regex_search(text, block)) << text;
    EXPECT_NE(text.find("       L2          Energy\n"), std::string::npos);
}

TEST(Driver, StrongCycleZeroDofs)
{
    std::ostringstream out;
    const ErrorReport r = run(short_run(1), ProblemKind::Strong, out, {false, "."});
    EXPECT_NE(out.str().find("Number of degrees of freedom: 133\n"), std::string::npos);
    ASSERT_EQ(r.cycles.size(), 1u);
    EXPECT_EQ(r.cycles[0].dofs, 133u);
    EXPECT_EQ(out.str().find("L2          Energy"), std::string::npos); // one cycle: no table
}

TEST(Driver, DeterministicOutput)
{
    std::ostringstream a, b;
    run(short_run(3), ProblemKind::Weak, a, {false, "."});
    run(short_run(3), ProblemKind::Weak, b, {false, "."});
    EXPECT_EQ(a.str(), b.str());
}

TEST(Driver, ControlRunWithoutEnrichment)
{
    Params p = short_run(2);
    p.use_xfem = false;
    std::ostringstream out;
    const ErrorReport r = run(p, ProblemKind::Weak, out, {false, "."});
    EXPECT_EQ(r.cycles[0].dofs, 89u);
    EXPECT_EQ(r.cycles[1].dofs, 337u);
}

TEST(Driver, WritesOneVtkPerCycle)
{
    const auto dir = std::filesystem::temp_directory_path() / "xfem_driver_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ostringstream out;
    run(short_run(2), ProblemKind::Strong, out, {true, dir});
    EXPECT_TRUE(std::filesystem::exists(dir / "solution-0.vtk"));
    EXPECT_TRUE(std::filesystem::exists(dir / "solution-1.vtk"));
    EXPECT_FALSE(std::filesystem::exists(dir / "solution-2.vtk"));
    std::filesystem::remove_all(dir);
}

TEST(Driver, RejectsBadParams)
{
    std::ostringstream out;
    Params p;
    p.q_points = 0;
    EXPECT_THROW(run(p, ProblemKind::Weak, out), Error);
}

#include "xfem/driver.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"Unfitted XFEM solver for elliptic interface problems on the unit disk"};
    std::string problem;
    std::string params_file;
    std::string output_dir = ".";
    bool no_vtk = false;
    app.add_option("problem", problem, "Model problem")->required()->check(CLI::IsMember({"weak", "strong"}));
    app.add_option("--params", params_file, "Parameter file with 'set <key> = <value>' lines")->check(CLI::ExistingFile);
    app.add_option("--output-dir", output_dir, "Directory for solution-<cycle>.vtk files")->check(CLI::ExistingDirectory);
    app.add_flag("--no-vtk", no_vtk, "Skip writing VTK files");
    CLI11_PARSE(app, argc, argv);

    try {
        xfem::Params params;
        if (!params_file.empty()) {
            std::ifstream in(params_file);
            std::stringstream text;
            text << in.rdbuf();
            params = xfem::parse_params(text.str());
        }
        xfem::RunOptions opts;
        opts.write_vtk = !no_vtk;
        opts.output_dir = output_dir;
        xfem::run(params, xfem::parse_problem_kind(problem), std::cout, opts);
    } catch (const xfem::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "CLI11.hpp"
#include "ominv/synthesis/fixtures.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char **argv) {
    CLI::App app{"writes the canned backend table for the curated fixtures"};
    std::string out;
    app.add_option("output", out, "table file")->required();
    CLI11_PARSE(app, argc, argv);
    std::ofstream f(out);
    if (!f) {
        std::cerr << "qe_table: cannot write " << out << "\n";
        return 3;
    }
    f << ominv::fixture_qe_table();
    return f.good() ? 0 : 3;
}

#include "CLI11.hpp"
#include "ominv/semialg/qe.hpp"

#include <fstream>
#include <iostream>
#include <map>

int main(int argc, char **argv) {
    CLI::App app{"canned quantifier elimination backend"};
    std::string table, mode = "table";
    app.add_option("--table", table, "file of '<sha256> <response>' lines");
    app.add_option("--mode", mode, "table | lie | unsupported")->check(CLI::IsMember({"table", "lie", "unsupported"}));
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, std::string> answers;
    if (!table.empty()) {
        std::ifstream in(table);
        if (!in) {
            std::cerr << "mock_qe: cannot read " << table << "\n";
            return 3;
        }
        std::string line;
        while (std::getline(in, line)) {
            auto sp = line.find(' ');
            if (line.empty() || line[0] == '#' || sp == std::string::npos)
                continue;
            answers[line.substr(0, sp)] = line.substr(sp + 1);
        }
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        std::string request = ominv::unescape_line(line);
        std::string reply = "unsupported";
        if (mode == "lie") {
            reply = "(true)";
        } else if (mode == "table") {
            auto it = answers.find(ominv::sha256_hex(request));
            if (it != answers.end())
                reply = it->second;
        }
        std::cout << ominv::escape_line(reply) << "\n" << std::flush;
    }
    return 0;
}

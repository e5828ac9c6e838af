// Acceptance battery entry point: one PASS/FAIL line per criterion; the
// process exits nonzero when any criterion fails.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "nvlab/suite.hpp"

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            std::string arg = argv[++i];
            size_t pos = 0;
            while (pos < arg.size()) {
                size_t comma = arg.find(',', pos);
                if (comma == std::string::npos) comma = arg.size();
                only.push_back(std::stoi(arg.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        }
    }
    const auto rep = nv::run_acceptance(only);
    std::printf("%s: %zu criteria\n", rep.all_pass ? "ALL PASS" : "FAILURES PRESENT",
                rep.results.size());
    return rep.all_pass ? 0 : 1;
}

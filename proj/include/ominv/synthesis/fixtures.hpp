#pragma once

#include "ominv/synthesis/decide.hpp"

#include <string>
#include <vector>

namespace ominv {

// Curated decision instances with hand-derived answers.
struct Fixture {
    std::string name;
    RationalMatrix A;
    RatVec x0;
    Formula target;
    Outcome builtin;
    Outcome backend;
    // quantifier-free U over v<c>_<j> answering backend_request
    Formula backend_answer;
};

std::vector<Fixture> curated_fixtures();

// "<sha256> <escaped answer>" lines for the canned backend.
std::string fixture_qe_table();

} // namespace ominv

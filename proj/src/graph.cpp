#include "stw/graph.hpp"

#include <algorithm>

namespace stw {

std::string problem_name(Problem p) {
    switch (p) {
        case Problem::Sfvs: return "sfvs";
        case Problem::Soct: return "soct";
        case Problem::Ect: return "ect";
        case Problem::Nmc: return "nmc";
        case Problem::Mwc: return "mwc";
        case Problem::Resfes: return "resfes";
    }
    return "?";
}

std::optional<Problem> problem_from_name(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "sfvs") return Problem::Sfvs;
    if (s == "soct") return Problem::Soct;
    if (s == "ect") return Problem::Ect;
    if (s == "nmc") return Problem::Nmc;
    if (s == "mwc") return Problem::Mwc;
    if (s == "resfes") return Problem::Resfes;
    return std::nullopt;
}

}  // namespace stw

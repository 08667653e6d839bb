#pragma once

// "laser reheat cappuccino" vs "laser reheat espresso": synset offsets
// and the expected level-2 keys.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "nsum/omega_map.hpp"

namespace worked {

inline const char* kMapText =
    "laser 3643253 3851341 3924532\n"
    "reheat 371264 544280\n"
    "cappuccino 7920349 7929519\n"
    "espresso 7920052 7920222 7929519\n";

inline nsum::ElementMap map() {
    std::istringstream in(kMapText);
    return nsum::read_map(in);
}

inline const std::vector<std::string> kMessage1{"laser", "reheat", "cappuccino"};
inline const std::vector<std::string> kMessage2{"laser", "reheat", "espresso"};

inline const std::vector<std::uint64_t> kS2{4014517,  4187533,  4222605,  4295796,  4395621,  4468812,
                                            8291613,  8300783,  8464629,  8473799,  11563602, 11572772,
                                            11771690, 11780860, 11844881, 11854051};

inline const std::vector<std::uint64_t> kS2Prime{
    4014517, 4187533,  4222605,  4295796,  4395621,  4468812,  8291316,  8291486,  8300783,  8464332, 8464502,
    8473799, 11563305, 11563475, 11572772, 11771393, 11771563, 11780860, 11844584, 11844754, 11854051};

inline const std::vector<std::uint64_t> kCommon{4014517, 4187533, 4222605, 4295796,  4395621, 4468812,
                                                8300783, 8473799, 11572772, 11780860, 11854051};

// Values message 1 shares with message 2.
inline const std::vector<std::uint64_t> kRecovered{371264, 544280, 3643253, 3851341, 3924532, 7929519};

}  // namespace worked

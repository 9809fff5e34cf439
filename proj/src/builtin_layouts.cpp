#include "yardsim/layout.hpp"

namespace yardsim {

// Shipped maps: two-lane ring roads around berth strips, one gate per kind
// opening onto road bands on both sides, entrance and exit as stubs on the
// west/east boundary. Uppercase letters are berths (capacity counts),
// lowercase the gates. The plain road cells stay connected with every
// gate/entrance/exit removed, and every band is two cells wide so opposing
// traffic can pass.

namespace {

// Charging 14, Inspection 10, Cleaning 10, Loading 16, Parking 30.
constexpr const char* kSmall =
    "; small yard\n"
    "#####################################\n"
    "#...................................#\n"
    "E...................................#\n"
    "#..CCCCCCCcCCCCCCC#IIIIIiIIIII####..#\n"
    "#...................................#\n"
    "#...................................X\n"
    "#..WWWWWwWWWWW#LLLLLLLLlLLLLLLLL##..#\n"
    "#...................................#\n"
    "#...................................#\n"
    "#..PPPPPPP.PPPPPPPPP##############..#\n"
    "#..PPPPPPPpPPPPPPP################..#\n"
    "#...................................#\n"
    "#...................................#\n"
    "#####################################\n";

// Charging 28, Inspection 20, Cleaning 20, Loading 30, Parking 60.
constexpr const char* kMedium =
    "; medium yard\n"
    "#############################################\n"
    "#...........................................#\n"
    "E...........................................#\n"
    "#..CCCCCCCCCCCCCCcCCCCCCCCCCCCCC##########..#\n"
    "#...........................................#\n"
    "#...........................................#\n"
    "#..IIIIIIIIIIiIIIIIIIIII##################..#\n"
    "#...........................................#\n"
    "#...........................................X\n"
    "#..WWWWWWWWWWwWWWWWWWWWW##################..#\n"
    "#...........................................#\n"
    "#...........................................#\n"
    "#..LLLLLLLLLLLLLLLlLLLLLLLLLLLLLLL########..#\n"
    "#...........................................#\n"
    "#...........................................#\n"
    "#..PPPPPPPPPPPPPP.PPPPPPPPPPPPPPPPP#######..#\n"
    "#..PPPPPPPPPPPPPPpPPPPPPPPPPPPPPP#########..#\n"
    "#...........................................#\n"
    "#...........................................#\n"
    "#############################################\n";

// Charging 42, Inspection 40, Cleaning 40, Loading 68, Parking 90.
constexpr const char* kLarge =
    "; large yard\n"
    "#####################################################\n"
    "#...................................................#\n"
    "E...................................................#\n"
    "#..CCCCCCCCCCCCCCCCCCCCCcCCCCCCCCCCCCCCCCCCCCC####..#\n"
    "#...................................................#\n"
    "#...................................................#\n"
    "#..IIIIIIIIIIIIIIIIIIIIiIIIIIIIIIIIIIIIIIIII######..#\n"
    "#...................................................#\n"
    "#...................................................X\n"
    "#..WWWWWWWWWWWWWWWWWWWWwWWWWWWWWWWWWWWWWWWWW######..#\n"
    "#...................................................#\n"
    "#...................................................#\n"
    "#..LLLLLLLLLLLLLLLLL.LLLLLLLLLLLLLLLLL############..#\n"
    "#..LLLLLLLLLLLLLLLLLlLLLLLLLLLLLLLLLLL############..#\n"
    "#...................................................#\n"
    "#...................................................#\n"
    "#..PPPPPPPPPPPPPPP.PPPPPPPPPPPPPPP################..#\n"
    "#..PPPPPPPPPPPPPPP.PPPPPPPPPPPPPPP################..#\n"
    "#..PPPPPPPPPPPPPPPpPPPPPPPPPPPPPPP################..#\n"
    "#...................................................#\n"
    "#...................................................#\n"
    "#####################################################\n";

}  // namespace

const char* builtin_layout_text(YardSize size) {
    switch (size) {
        case YardSize::Small: return kSmall;
        case YardSize::Medium: return kMedium;
        case YardSize::Large: return kLarge;
    }
    return kSmall;
}

const YardLayout& builtin_layout(YardSize size) {
    static const YardLayout small = parse_layout(kSmall);
    static const YardLayout medium = parse_layout(kMedium);
    static const YardLayout large = parse_layout(kLarge);
    switch (size) {
        case YardSize::Small: return small;
        case YardSize::Medium: return medium;
        case YardSize::Large: return large;
    }
    return small;
}

}  // namespace yardsim

#ifndef YARDSIM_LAYOUT_HPP
#define YARDSIM_LAYOUT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace yardsim {

// Station kinds. Enum order doubles as the deterministic tie-break order
// (Charging < Inspection < Cleaning < Loading) and as the fixed loop order
// of the isolated controller.
enum class StationKind : int {
    Charging = 0,
    Inspection = 1,
    Cleaning = 2,
    Loading = 3,
    Parking = 4,
};

inline constexpr int kStationKindCount = 5;
inline constexpr std::array<StationKind, 4> kCircuitKinds = {
    StationKind::Charging, StationKind::Inspection, StationKind::Cleaning,
    StationKind::Loading};

const char* to_string(StationKind kind);
std::optional<StationKind> station_kind_from_string(std::string_view name);

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell& a, const Cell& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
};

// One facility per kind: a single gate cell on the road plus an abstract
// berth pool. Berth interiors are not grid cells.
struct Station {
    StationKind kind = StationKind::Charging;
    Cell gate;
    int berth_count = 0;
};

class LayoutError : public std::runtime_error {
  public:
    explicit LayoutError(const std::string& msg) : std::runtime_error(msg) {}
};

// Immutable after construction; shared read-only across runs.
struct YardLayout {
    int width = 0;
    int height = 0;
    double cell_size_m = 10.0;
    std::vector<char> grid;  // legend char per cell, row-major
    std::array<Station, kStationKindCount> stations{};
    Cell entrance;
    Cell exit;

    int cell_count() const { return width * height; }
    int index(Cell c) const { return c.y * width + c.x; }
    Cell cell_at(int idx) const { return Cell{idx % width, idx / width}; }
    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }
    char glyph(Cell c) const { return grid[index(c)]; }
    bool traversable(Cell c) const;
    // Gate, entrance and exit cells carry no through traffic; planners may
    // use them only as the start or the goal of a route.
    bool is_stopping(Cell c) const;
    const Station& station(StationKind kind) const {
        return stations[static_cast<int>(kind)];
    }
    Station& station(StationKind kind) {
        return stations[static_cast<int>(kind)];
    }

    friend bool operator==(const YardLayout& a, const YardLayout& b);
};

enum class YardSize : int { Small = 0, Medium = 1, Large = 2 };

const char* to_string(YardSize size);
std::optional<YardSize> yard_size_from_string(std::string_view name);

// Parses the ASCII layout format:
//   '.' road   '#' blocked   'E' entrance   'X' exit
//   'C'/'I'/'W'/'L'/'P' one berth of Charging/Inspection/Cleaning/Loading/Parking
//   'c'/'i'/'w'/'l'/'p' the gate cell of the corresponding station
// Lines starting with ';' are comments. Throws LayoutError on syntax or
// structural violations.
YardLayout parse_layout(std::string_view text);

std::string serialize_layout(const YardLayout& layout);

// Empty when all structural invariants hold; each entry names the offending
// cell or station.
std::vector<std::string> validate_layout(const YardLayout& layout);

// Shipped layouts with per-size berth capacities
// (Charging 14/28/42, Cleaning 10/20/40, Inspection 10/20/40,
//  Loading 16/30/68, Parking 30/60/90).
const YardLayout& builtin_layout(YardSize size);
const char* builtin_layout_text(YardSize size);

// Shortest 4-connected path length in cells over traversable cells,
// ignoring vehicles and time. nullopt when unreachable.
std::optional<int> grid_distance(const YardLayout& layout, Cell from, Cell to);

// BFS distances from `goal` to every traversable cell; -1 = unreachable.
// Doubles as the admissible heuristic for the space-time search.
struct DistanceField {
    std::vector<int32_t> dist;
    int width = 0;
    int32_t at(Cell c) const { return dist[c.y * width + c.x]; }
};

DistanceField distance_field(const YardLayout& layout, Cell goal);

}  // namespace yardsim

#endif

#include "yardsim/layout.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace yardsim {

namespace {

constexpr const char* kKindNames[kStationKindCount] = {
    "charging", "inspection", "cleaning", "loading", "parking"};
constexpr char kBerthChars[kStationKindCount] = {'C', 'I', 'W', 'L', 'P'};
constexpr char kGateChars[kStationKindCount] = {'c', 'i', 'w', 'l', 'p'};

int berth_kind_of(char ch) {
    for (int k = 0; k < kStationKindCount; ++k)
        if (kBerthChars[k] == ch) return k;
    return -1;
}

int gate_kind_of(char ch) {
    for (int k = 0; k < kStationKindCount; ++k)
        if (kGateChars[k] == ch) return k;
    return -1;
}

std::string cell_str(Cell c) {
    std::ostringstream os;
    os << "(" << c.x << "," << c.y << ")";
    return os.str();
}

}  // namespace

const char* to_string(StationKind kind) {
    return kKindNames[static_cast<int>(kind)];
}

std::optional<StationKind> station_kind_from_string(std::string_view name) {
    for (int k = 0; k < kStationKindCount; ++k)
        if (name == kKindNames[k]) return static_cast<StationKind>(k);
    return std::nullopt;
}

const char* to_string(YardSize size) {
    switch (size) {
        case YardSize::Small: return "small";
        case YardSize::Medium: return "medium";
        case YardSize::Large: return "large";
    }
    return "?";
}

std::optional<YardSize> yard_size_from_string(std::string_view name) {
    if (name == "small") return YardSize::Small;
    if (name == "medium") return YardSize::Medium;
    if (name == "large") return YardSize::Large;
    return std::nullopt;
}

bool YardLayout::traversable(Cell c) const {
    if (!in_bounds(c)) return false;
    char ch = glyph(c);
    return ch == '.' || ch == 'E' || ch == 'X' || gate_kind_of(ch) >= 0;
}

bool YardLayout::is_stopping(Cell c) const {
    char ch = glyph(c);
    return ch == 'E' || ch == 'X' || gate_kind_of(ch) >= 0;
}

bool operator==(const YardLayout& a, const YardLayout& b) {
    if (a.width != b.width || a.height != b.height || a.grid != b.grid)
        return false;
    if (!(a.entrance == b.entrance) || !(a.exit == b.exit)) return false;
    for (int k = 0; k < kStationKindCount; ++k) {
        if (a.stations[k].kind != b.stations[k].kind ||
            !(a.stations[k].gate == b.stations[k].gate) ||
            a.stations[k].berth_count != b.stations[k].berth_count)
            return false;
    }
    return true;
}

YardLayout parse_layout(std::string_view text) {
    std::vector<std::string> rows;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.remove_suffix(1);
        if (!line.empty() && line.front() == ';') continue;  // comment
        if (line.empty()) continue;
        rows.emplace_back(line);
    }
    if (rows.empty()) throw LayoutError("layout: no map rows");

    YardLayout out;
    out.height = static_cast<int>(rows.size());
    out.width = 0;
    for (const auto& r : rows)
        out.width = std::max(out.width, static_cast<int>(r.size()));
    out.grid.assign(static_cast<size_t>(out.width) * out.height, '#');

    int entrances = 0, exits = 0;
    std::array<int, kStationKindCount> gates{};
    std::array<int, kStationKindCount> berths{};

    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < static_cast<int>(rows[y].size()); ++x) {
            char ch = rows[y][static_cast<size_t>(x)];
            Cell c{x, y};
            if (ch == '.' || ch == '#') {
                // pass
            } else if (ch == 'E') {
                ++entrances;
                out.entrance = c;
            } else if (ch == 'X') {
                ++exits;
                out.exit = c;
            } else if (int k = berth_kind_of(ch); k >= 0) {
                ++berths[k];
            } else if (int g = gate_kind_of(ch); g >= 0) {
                ++gates[g];
                out.stations[g].gate = c;
            } else {
                throw LayoutError("layout: unknown character '" +
                                  std::string(1, ch) + "' at " + cell_str(c));
            }
            out.grid[out.index(c)] = ch;
        }
    }

    if (entrances == 0) throw LayoutError("layout: missing entrance 'E'");
    if (entrances > 1) throw LayoutError("layout: duplicate entrance 'E'");
    if (exits == 0) throw LayoutError("layout: missing exit 'X'");
    if (exits > 1) throw LayoutError("layout: duplicate exit 'X'");
    for (int k = 0; k < kStationKindCount; ++k) {
        out.stations[k].kind = static_cast<StationKind>(k);
        out.stations[k].berth_count = berths[k];
        if (gates[k] == 0)
            throw LayoutError(std::string("layout: missing gate for ") +
                              kKindNames[k]);
        if (gates[k] > 1)
            throw LayoutError(std::string("layout: duplicate gate for ") +
                              kKindNames[k]);
    }

    auto violations = validate_layout(out);
    if (!violations.empty()) throw LayoutError("layout: " + violations.front());
    return out;
}

std::string serialize_layout(const YardLayout& layout) {
    std::string out;
    out.reserve(static_cast<size_t>(layout.cell_count()) + layout.height);
    for (int y = 0; y < layout.height; ++y) {
        for (int x = 0; x < layout.width; ++x)
            out.push_back(layout.grid[layout.index(Cell{x, y})]);
        out.push_back('\n');
    }
    return out;
}

std::vector<std::string> validate_layout(const YardLayout& layout) {
    std::vector<std::string> out;
    if (layout.width <= 0 || layout.height <= 0 ||
        layout.grid.size() !=
            static_cast<size_t>(layout.width) * layout.height) {
        out.push_back("grid dimensions inconsistent");
        return out;
    }
    if (!layout.traversable(layout.entrance))
        out.push_back("entrance " + cell_str(layout.entrance) +
                       " is not traversable");
    if (!layout.traversable(layout.exit))
        out.push_back("exit " + cell_str(layout.exit) + " is not traversable");
    for (int k = 0; k < kStationKindCount; ++k) {
        const Station& st = layout.stations[k];
        if (st.berth_count <= 0)
            out.push_back(std::string(kKindNames[k]) + " has zero berths");
        if (!layout.traversable(st.gate))
            out.push_back(std::string(kKindNames[k]) + " gate " +
                           cell_str(st.gate) + " is not traversable");
    }
    if (!out.empty()) return out;  // reachability needs a sane structure

    // Flood fill from the entrance.
    DistanceField from_entrance = distance_field(layout, layout.entrance);
    for (int k = 0; k < kStationKindCount; ++k) {
        const Station& st = layout.stations[k];
        if (from_entrance.at(st.gate) < 0)
            out.push_back(std::string(kKindNames[k]) + " gate " +
                           cell_str(st.gate) +
                           " is unreachable from the entrance");
    }
    DistanceField from_exit = distance_field(layout, layout.exit);
    for (int k = 0; k < kStationKindCount; ++k) {
        const Station& st = layout.stations[k];
        if (from_exit.at(st.gate) < 0)
            out.push_back(std::string("exit is unreachable from ") +
                           kKindNames[k] + " gate " + cell_str(st.gate));
    }
    return out;
}

DistanceField distance_field(const YardLayout& layout, Cell goal) {
    DistanceField f;
    f.width = layout.width;
    f.dist.assign(layout.grid.size(), -1);
    if (!layout.traversable(goal)) return f;
    std::deque<Cell> queue;
    f.dist[layout.index(goal)] = 0;
    queue.push_back(goal);
    static constexpr int dx[4] = {1, -1, 0, 0};
    static constexpr int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        int32_t d = f.dist[layout.index(c)];
        for (int i = 0; i < 4; ++i) {
            Cell n{c.x + dx[i], c.y + dy[i]};
            if (!layout.traversable(n)) continue;
            int32_t& dn = f.dist[layout.index(n)];
            if (dn < 0) {
                dn = d + 1;
                queue.push_back(n);
            }
        }
    }
    return f;
}

std::optional<int> grid_distance(const YardLayout& layout, Cell from, Cell to) {
    if (!layout.traversable(from) || !layout.traversable(to))
        return std::nullopt;
    DistanceField f = distance_field(layout, to);
    int32_t d = f.at(from);
    if (d < 0) return std::nullopt;
    return static_cast<int>(d);
}

}  // namespace yardsim

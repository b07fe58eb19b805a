#include "lemniscate/levelset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "lemniscate/domain.hpp"
#include "lemniscate/errors.hpp"

namespace lemniscate {

long long LevelSetRaster::true_count() const {
    long long total = 0;
    for (std::uint64_t w : bits) total += std::popcount(w);
    return total;
}

double log_abs_eval(const Eigen::ArrayXcd& roots, Complex z) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < roots.size(); ++k)
        sum += 0.5 * std::log(std::norm(z - roots[k]));
    return sum;
}

std::array<double, 4> auto_bbox_log(const Eigen::ArrayXcd& roots, double log_level, double cell) {
    if (roots.size() == 0) throw ParameterError("auto_bbox: no roots");
    if (!(cell > 0.0)) throw ParameterError("auto_bbox: cell must be positive");
    const double pad = std::exp(log_level / static_cast<double>(roots.size())) + 2.0 * cell;
    const Eigen::ArrayXd re = roots.real();
    const Eigen::ArrayXd im = roots.imag();
    return {re.minCoeff() - pad, im.minCoeff() - pad, re.maxCoeff() + pad, im.maxCoeff() + pad};
}

std::array<double, 4> auto_bbox(const Eigen::ArrayXcd& roots, double level, double cell) {
    if (!(level > 0.0)) throw ParameterError("auto_bbox: level must be positive");
    return auto_bbox_log(roots, std::log(level), cell);
}

LevelSetRaster rasterize_grid_log(const Eigen::ArrayXcd& roots, double log_level,
                                  double x0, double y0, Eigen::Index nx, Eigen::Index ny,
                                  double cell, int threads) {
    if (roots.size() == 0) throw ParameterError("rasterize: no roots");
    if (!(cell > 0.0)) throw ParameterError("rasterize: cell must be positive");
    if (nx < 1 || ny < 1) throw ParameterError("rasterize: empty grid");
    if (static_cast<long long>(nx) * static_cast<long long>(ny) > kMaxRasterCells) {
        const double w = static_cast<double>(nx) * cell;
        const double h = static_cast<double>(ny) * cell;
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "rasterize: %lld x %lld cells exceed the %lld-cell guard; "
                      "smallest affordable cell for this box is %.6g",
                      static_cast<long long>(nx), static_cast<long long>(ny),
                      kMaxRasterCells, std::sqrt(w * h / static_cast<double>(kMaxRasterCells)));
        throw ResolutionError(msg);
    }

    LevelSetRaster raster;
    raster.x0 = x0;
    raster.y0 = y0;
    raster.x1 = x0 + static_cast<double>(nx) * cell;
    raster.y1 = y0 + static_cast<double>(ny) * cell;
    raster.nx = nx;
    raster.ny = ny;
    raster.cell = cell;
    raster.level = std::exp(log_level);
    raster.words_per_row = (nx + 63) / 64;
    raster.bits.assign(static_cast<std::size_t>(raster.words_per_row) * ny, 0);

    // Compare doubled log sums: sum_k log|z-r_k|^2 <= 2 log(level).
    const double threshold = 2.0 * log_level;
    Eigen::ArrayXd xs(nx);
    for (Eigen::Index i = 0; i < nx; ++i)
        xs[i] = x0 + (static_cast<double>(i) + 0.5) * cell;

    auto work = [&](Eigen::Index j_begin, Eigen::Index j_end) {
        Eigen::ArrayXd acc(nx);
        Eigen::ArrayXd dx(nx);
        for (Eigen::Index j = j_begin; j < j_end; ++j) {
            const double y = y0 + (static_cast<double>(j) + 0.5) * cell;
            acc.setZero();
            for (Eigen::Index k = 0; k < roots.size(); ++k) {
                dx = xs - roots[k].real();
                const double dy = y - roots[k].imag();
                acc += (dx.square() + dy * dy).log();
            }
            std::uint64_t* row = raster.bits.data() +
                                 static_cast<std::size_t>(j) * raster.words_per_row;
            for (Eigen::Index i = 0; i < nx; ++i)
                if (acc[i] <= threshold) row[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
    };

    const int n_workers = std::clamp<int>(threads, 1, static_cast<int>(std::min<Eigen::Index>(ny, 64)));
    if (n_workers == 1) {
        work(0, ny);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) {
            const Eigen::Index j0 = ny * t / n_workers;
            const Eigen::Index j1 = ny * (t + 1) / n_workers;
            pool.emplace_back(work, j0, j1);
        }
        for (auto& th : pool) th.join();
    }
    return raster;
}

LevelSetRaster rasterize(const Eigen::ArrayXcd& roots, double level,
                         const std::array<double, 4>& bbox, double cell, int threads) {
    if (!(level > 0.0)) throw ParameterError("rasterize: level must be positive");
    if (!(cell > 0.0)) throw ParameterError("rasterize: cell must be positive");
    const auto [x0, y0, x1, y1] = bbox;
    if (!(x1 > x0) || !(y1 > y0)) throw ParameterError("rasterize: empty bounding box");
    const auto nx = static_cast<Eigen::Index>(std::ceil((x1 - x0) / cell - 1e-12));
    const auto ny = static_cast<Eigen::Index>(std::ceil((y1 - y0) / cell - 1e-12));
    return rasterize_grid_log(roots, std::log(level), x0, y0, std::max<Eigen::Index>(nx, 1),
                              std::max<Eigen::Index>(ny, 1), cell, threads);
}

namespace {

// Runs of set bits in one padded row, as [i0, i1) intervals.
void extract_runs(const std::uint64_t* row, Eigen::Index nx,
                  std::vector<std::pair<Eigen::Index, Eigen::Index>>& out) {
    out.clear();
    Eigen::Index i = 0;
    while (i < nx) {
        std::uint64_t word = row[i >> 6] >> (i & 63);
        if (word == 0) {
            i = ((i >> 6) + 1) << 6;
            continue;
        }
        i += std::countr_zero(word);
        if (i >= nx) break;
        const Eigen::Index start = i;
        while (i < nx) {
            // Invert before shifting so bits shifted in from the top read as
            // "still set" and word-crossing runs stay whole.
            const std::uint64_t inv = (~row[i >> 6]) >> (i & 63);
            if (inv == 0) {
                i = ((i >> 6) + 1) << 6;
                continue;
            }
            i += std::countr_zero(inv);
            break;
        }
        out.emplace_back(start, std::min(i, nx));
    }
}

struct UnionFind {
    std::vector<int> parent;
    int make() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

int LabelField::label_at(Eigen::Index i, Eigen::Index j) const {
    if (j < 0 || static_cast<std::size_t>(j) >= rows.size()) return -1;
    const auto& row = rows[j];
    auto it = std::upper_bound(row.begin(), row.end(), i,
                               [](Eigen::Index v, const Run& r) { return v < r.i1; });
    if (it != row.end() && it->i0 <= i && i < it->i1) return it->component;
    return -1;
}

LabelField label_field(const LevelSetRaster& raster) {
    LabelField field;
    field.rows.resize(raster.ny);

    UnionFind uf;
    std::vector<int> prev_ids, cur_ids;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> prev_runs, cur_runs;
    std::vector<std::vector<int>> run_ids(raster.ny);

    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        extract_runs(raster.bits.data() + static_cast<std::size_t>(j) * raster.words_per_row,
                     raster.nx, cur_runs);
        cur_ids.clear();
        std::size_t p = 0;
        for (const auto& [i0, i1] : cur_runs) {
            const int id = uf.make();
            cur_ids.push_back(id);
            while (p < prev_runs.size() && prev_runs[p].second <= i0) ++p;
            for (std::size_t q = p; q < prev_runs.size() && prev_runs[q].first < i1; ++q)
                uf.unite(id, prev_ids[q]);
        }
        field.rows[j].reserve(cur_runs.size());
        for (const auto& [i0, i1] : cur_runs) field.rows[j].push_back({i0, i1, -1});
        run_ids[j] = cur_ids;
        prev_runs.swap(cur_runs);
        prev_ids.swap(cur_ids);
    }

    // Component ids in row-major discovery order of their union-find roots.
    std::unordered_map<int, int> root_to_component;
    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        for (std::size_t r = 0; r < field.rows[j].size(); ++r) {
            const int root = uf.find(run_ids[j][r]);
            auto [it, inserted] = root_to_component.try_emplace(
                root, static_cast<int>(root_to_component.size()));
            field.rows[j][r].component = it->second;
        }
    }
    field.n_components = static_cast<int>(root_to_component.size());
    return field;
}

ComponentReport component_report(const LevelSetRaster& raster, const LabelField& field) {
    ComponentReport report;
    report.n_components = field.n_components;
    report.diameter_error = raster.cell * std::numbers::sqrt2;

    const int n = field.n_components;
    std::vector<long long> cells(n, 0);
    std::vector<std::array<Eigen::Index, 4>> extents(
        n, {std::numeric_limits<Eigen::Index>::max(), std::numeric_limits<Eigen::Index>::max(),
            Eigen::Index{-1}, Eigen::Index{-1}});
    std::vector<std::vector<Complex>> boundary(n);

    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        for (const auto& run : field.rows[j]) {
            const int comp = run.component;
            cells[comp] += run.i1 - run.i0;
            auto& e = extents[comp];
            e[0] = std::min(e[0], run.i0);
            e[1] = std::min(e[1], j);
            e[2] = std::max(e[2], run.i1 - 1);
            e[3] = std::max(e[3], j);
            for (Eigen::Index i = run.i0; i < run.i1; ++i) {
                const bool open_left = (i == run.i0);
                const bool open_right = (i == run.i1 - 1);
                const bool open_down = (j == 0) || !raster.get(i, j - 1);
                const bool open_up = (j == raster.ny - 1) || !raster.get(i, j + 1);
                if (open_left || open_right || open_down || open_up)
                    boundary[comp].push_back(raster.cell_center(i, j));
            }
        }
    }

    report.true_cells = std::accumulate(cells.begin(), cells.end(), 0LL);
    report.components.reserve(n);
    for (int c = 0; c < n; ++c) {
        Component comp;
        comp.id = c;
        comp.cells = cells[c];
        comp.diameter = boundary[c].empty() ? 0.0 : set_diameter(boundary[c]);
        comp.bbox = {raster.x0 + static_cast<double>(extents[c][0]) * raster.cell,
                     raster.y0 + static_cast<double>(extents[c][1]) * raster.cell,
                     raster.x0 + static_cast<double>(extents[c][2] + 1) * raster.cell,
                     raster.y0 + static_cast<double>(extents[c][3] + 1) * raster.cell};
        report.components.push_back(comp);
    }
    std::sort(report.components.begin(), report.components.end(),
              [](const Component& a, const Component& b) {
                  return a.diameter > b.diameter ||
                         (a.diameter == b.diameter && a.id < b.id);
              });
    return report;
}

ComponentReport label_components(const LevelSetRaster& raster) {
    return component_report(raster, label_field(raster));
}

ClaimVerdict check_claim(const ComponentReport& report, int n_required, double min_diameter) {
    ClaimVerdict verdict;
    int satisfied = 0;
    for (const Component& c : report.components)
        if (c.diameter + report.diameter_error >= min_diameter) ++satisfied;
    verdict.pass = satisfied >= n_required;
    const int top = std::min<int>(std::max(n_required, 0),
                                  static_cast<int>(report.components.size()));
    verdict.top_diameters.reserve(top);
    for (int k = 0; k < top; ++k)
        verdict.top_diameters.push_back(report.components[k].diameter);
    return verdict;
}

double projected_cover_length(const LevelSetRaster& raster, Complex direction) {
    if (std::abs(std::abs(direction) - 1.0) > 1e-9)
        throw ParameterError("projected_cover_length: direction must be a unit vector");
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(raster.true_count()));
    std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        extract_runs(raster.bits.data() + static_cast<std::size_t>(j) * raster.words_per_row,
                     raster.nx, runs);
        for (const auto& [i0, i1] : runs)
            for (Eigen::Index i = i0; i < i1; ++i) {
                const Complex z = raster.cell_center(i, j);
                ts.push_back(z.real() * direction.real() + z.imag() * direction.imag());
            }
    }
    if (ts.empty()) return 0.0;
    std::sort(ts.begin(), ts.end());
    const double half = raster.cell / 2.0;
    double total = 0.0;
    double start = ts.front() - half;
    double end = ts.front() + half;
    for (double t : ts) {
        if (t - half > end) {
            total += end - start;
            start = t - half;
        }
        end = t + half;
    }
    total += end - start;
    return total;
}

long long containment_violations(const LevelSetRaster& raster,
                                 std::span<const ClosedCurve> strips,
                                 double epsilon, double domain_c) {
    make_domain(domain_c);
    if (!(epsilon >= 0.0)) throw ParameterError("containment_violations: epsilon must be >= 0");
    std::vector<std::array<double, 4>> boxes;
    boxes.reserve(strips.size());
    for (const auto& s : strips) {
        auto b = s.bounding_box();
        boxes.push_back({b[0] - epsilon, b[1] - epsilon, b[2] + epsilon, b[3] + epsilon});
    }
    long long violations = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        extract_runs(raster.bits.data() + static_cast<std::size_t>(j) * raster.words_per_row,
                     raster.nx, runs);
        for (const auto& [i0, i1] : runs)
            for (Eigen::Index i = i0; i < i1; ++i) {
                const Complex z = raster.cell_center(i, j);
                bool near = false;
                for (std::size_t s = 0; s < strips.size(); ++s) {
                    const auto& b = boxes[s];
                    if (z.real() < b[0] || z.real() > b[2] || z.imag() < b[1] || z.imag() > b[3])
                        continue;
                    if (point_in_curve(strips[s], z) ||
                        curve_point_distance(strips[s], z) <= epsilon) {
                        near = true;
                        break;
                    }
                }
                if (!near) ++violations;
                if (!domain_contains(domain_c, z, 0.0)) ++violations;
            }
    }
    return violations;
}

void save_raster_text(const LevelSetRaster& raster, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    char header[200];
    std::snprintf(header, sizeof header, "%lld %lld %.17g %.17g %.17g %.17g %.17g\n",
                  static_cast<long long>(raster.nx), static_cast<long long>(raster.ny),
                  raster.x0, raster.y0, raster.x1, raster.y1, raster.level);
    out << header;
    std::string row(static_cast<std::size_t>(raster.nx), '0');
    for (Eigen::Index j = 0; j < raster.ny; ++j) {
        for (Eigen::Index i = 0; i < raster.nx; ++i)
            row[static_cast<std::size_t>(i)] = raster.get(i, j) ? '1' : '0';
        out << row << '\n';
    }
}

LevelSetRaster load_raster_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    long long nx = 0, ny = 0;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0, level = 1;
    if (!(in >> nx >> ny >> x0 >> y0 >> x1 >> y1 >> level) || nx < 1 || ny < 1)
        throw ParameterError("malformed raster header in " + path.string());
    LevelSetRaster raster;
    raster.x0 = x0;
    raster.y0 = y0;
    raster.x1 = x1;
    raster.y1 = y1;
    raster.nx = nx;
    raster.ny = ny;
    raster.cell = (x1 - x0) / static_cast<double>(nx);
    raster.level = level;
    raster.words_per_row = (nx + 63) / 64;
    raster.bits.assign(static_cast<std::size_t>(raster.words_per_row) * ny, 0);
    std::string row;
    for (long long j = 0; j < ny; ++j) {
        if (!(in >> row) || row.size() != static_cast<std::size_t>(nx))
            throw ParameterError("malformed raster row in " + path.string());
        for (long long i = 0; i < nx; ++i)
            if (row[static_cast<std::size_t>(i)] == '1') raster.set(i, j);
    }
    return raster;
}

namespace {

// Marching squares over cell centers. Corners of block (I, J) are the cells
// (I,J), (I+1,J), (I+1,J+1), (I,J+1); cells outside the grid are false.
// Segments run with the inside on their left; the two saddle cases keep
// diagonal cells separate, matching 4-connectivity.
struct MsSegment {
    std::uint8_t from, to, owner;  // edges S=0 E=1 N=2 W=3; owner corner BL=0 BR=1 TR=2 TL=3
};

const std::vector<MsSegment> kMsTable[16] = {
    /* 0 */ {},
    /* 1 */ {{0, 3, 0}},
    /* 2 */ {{1, 0, 1}},
    /* 3 */ {{1, 3, 0}},
    /* 4 */ {{2, 1, 2}},
    /* 5 */ {{0, 3, 0}, {2, 1, 2}},
    /* 6 */ {{2, 0, 1}},
    /* 7 */ {{2, 3, 0}},
    /* 8 */ {{3, 2, 3}},
    /* 9 */ {{0, 2, 0}},
    /*10 */ {{1, 0, 1}, {3, 2, 3}},
    /*11 */ {{1, 2, 1}},
    /*12 */ {{3, 1, 3}},
    /*13 */ {{0, 1, 0}},
    /*14 */ {{3, 0, 1}},
    /*15 */ {},
};

}  // namespace

std::vector<ComponentContour> component_contours(const LevelSetRaster& raster,
                                                 const LabelField& field) {
    const Eigen::Index nx = raster.nx, ny = raster.ny;
    const std::int64_t stride = 2 * nx + 3;
    auto edge_key = [&](Eigen::Index I, Eigen::Index J, std::uint8_t e) -> std::int64_t {
        std::int64_t kx = 0, ky = 0;
        switch (e) {
            case 0: kx = 2 * I + 2; ky = 2 * J + 1; break;  // S
            case 1: kx = 2 * I + 3; ky = 2 * J + 2; break;  // E
            case 2: kx = 2 * I + 2; ky = 2 * J + 3; break;  // N
            default: kx = 2 * I + 1; ky = 2 * J + 2; break;  // W
        }
        return ky * stride + kx;
    };

    std::unordered_map<std::int64_t, std::pair<std::int64_t, int>> next;
    std::vector<std::pair<std::int64_t, int>> starts;  // scan order, for determinism
    auto cell_true = [&](Eigen::Index i, Eigen::Index j) {
        return i >= 0 && j >= 0 && i < nx && j < ny && raster.get(i, j);
    };

    for (Eigen::Index J = -1; J < ny; ++J) {
        for (Eigen::Index I = -1; I < nx; ++I) {
            const int code = (cell_true(I, J) ? 1 : 0) | (cell_true(I + 1, J) ? 2 : 0) |
                             (cell_true(I + 1, J + 1) ? 4 : 0) | (cell_true(I, J + 1) ? 8 : 0);
            for (const MsSegment& seg : kMsTable[code]) {
                Eigen::Index oi = I + (seg.owner == 1 || seg.owner == 2 ? 1 : 0);
                Eigen::Index oj = J + (seg.owner == 2 || seg.owner == 3 ? 1 : 0);
                const int comp = field.label_at(oi, oj);
                const std::int64_t from = edge_key(I, J, seg.from);
                next[from] = {edge_key(I, J, seg.to), comp};
                starts.emplace_back(from, comp);
            }
        }
    }

    std::vector<ComponentContour> contours(field.n_components);
    for (int c = 0; c < field.n_components; ++c) contours[c].id = c;

    std::unordered_map<std::int64_t, bool> visited;
    visited.reserve(next.size());
    auto key_xy = [&](std::int64_t key) {
        return std::pair<std::int64_t, std::int64_t>{key % stride, key / stride};
    };
    for (const auto& [start, comp] : starts) {
        if (visited[start]) continue;
        std::vector<std::pair<std::int64_t, std::int64_t>> keys;
        std::int64_t k = start;
        do {
            visited[k] = true;
            keys.push_back(key_xy(k));
            k = next.at(k).first;
        } while (k != start);
        // Drop vertices interior to straight runs (integer collinearity).
        std::vector<Complex> loop;
        loop.reserve(keys.size());
        const std::size_t m = keys.size();
        for (std::size_t v = 0; v < m; ++v) {
            const auto& prev = keys[(v + m - 1) % m];
            const auto& cur = keys[v];
            const auto& nxt = keys[(v + 1) % m];
            const std::int64_t ax = cur.first - prev.first, ay = cur.second - prev.second;
            const std::int64_t bx = nxt.first - cur.first, by = nxt.second - cur.second;
            if (ax * by - ay * bx == 0 && ax * bx + ay * by > 0) continue;
            loop.emplace_back(raster.x0 + static_cast<double>(cur.first) * raster.cell / 2.0,
                              raster.y0 + static_cast<double>(cur.second) * raster.cell / 2.0);
        }
        if (comp >= 0 && loop.size() >= 3) contours[comp].loops.push_back(std::move(loop));
    }
    return contours;
}

void write_svg(const std::filesystem::path& path, const std::array<double, 4>& bbox,
               const std::vector<ComponentContour>& components,
               const std::vector<SvgOverlay>& overlays) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    const auto [x0, y0, x1, y1] = bbox;
    const double w = x1 - x0, h = y1 - y0;
    const double flip = y0 + y1;  // svg y axis points down
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"%.6g\" "
                  "viewBox=\"%.9g %.9g %.9g %.9g\">\n",
                  800.0 * h / w, x0, y0, w, h);
    out << buf;
    const double stroke = std::max(w, h) / 800.0;

    auto emit_points = [&](const std::vector<Complex>& pts, bool close) {
        std::string d;
        char p[80];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(p, sizeof p, "%c%.9g %.9g", i == 0 ? 'M' : 'L', pts[i].real(),
                          flip - pts[i].imag());
            d += p;
        }
        if (close) d += 'Z';
        return d;
    };

    for (const auto& overlay : overlays) {
        out << "<path d=\"" << emit_points(overlay.curve.vertices, true)
            << "\" fill=\"none\" stroke=\"" << overlay.stroke << "\" stroke-width=\""
            << stroke << "\"/>\n";
    }
    for (const auto& comp : components) {
        if (comp.loops.empty()) continue;
        std::string d;
        for (const auto& loop : comp.loops) d += emit_points(loop, true);
        out << "<path id=\"component-" << comp.id << "\" d=\"" << d
            << "\" fill=\"#d62728\" fill-opacity=\"0.35\" fill-rule=\"evenodd\" "
               "stroke=\"#d62728\" stroke-width=\""
            << stroke << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace lemniscate

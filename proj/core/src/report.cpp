#include "gem/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gem/errors.hpp"
#include "gem/format.hpp"

namespace gem::report {

namespace fs = std::filesystem;

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void write_file(const fs::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::string_view header)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || format::trim(line) != header)
        throw IoError(path.string() + ": expected header '" + std::string(header) + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (format::trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.emplace_back(format::trim(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

double cell_double(const std::vector<std::string>& row, std::size_t k, const fs::path& path)
{
    if (k >= row.size()) throw IoError(path.string() + ": short row");
    const auto v = format::parse_double(row[k]);
    if (!v) throw IoError(path.string() + ": unparsable value '" + row[k] + "'");
    return *v;
}

/// Rounded tick step close to span / 5.
double nice_step(double span)
{
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle()
    {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

class Plot {
  public:
    Plot(Range x, Range y, std::string title, std::string xlabel, std::string ylabel, bool equal = false)
        : x_(x), y_(y)
    {
        x_.settle();
        y_.settle();
        if (equal) {
            const double span = std::max(x_.hi - x_.lo, y_.hi - y_.lo);
            const double cx = 0.5 * (x_.lo + x_.hi), cy = 0.5 * (y_.lo + y_.hi);
            x_ = {cx - 0.5 * span, cx + 0.5 * span};
            y_ = {cy - 0.5 * span, cy + 0.5 * span};
            width_ = height_ = 560;
        }
        svg_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ + left_ + right_ << "\" height=\""
             << height_ + top_ + bottom_ << "\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
             << "<text x=\"" << left_ + width_ / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
             << "</text>\n";
        axes(xlabel, ylabel);
    }

    void polyline(const std::vector<Vec2>& pts, const char* colour, bool closed)
    {
        if (pts.empty()) return;
        svg_ << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << colour
             << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts) svg_ << format::fixed(px(p.x()), 2) << ',' << format::fixed(py(p.y()), 2) << ' ';
        svg_ << "\"/>\n";
    }

    void legend(const std::vector<std::pair<std::string, const char*>>& entries)
    {
        int y = top_ + 16;
        for (const auto& [label, colour] : entries) {
            const int x = left_ + width_ - 150;
            svg_ << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 24 << "\" y2=\"" << y - 4
                 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
                 << "<text x=\"" << x + 30 << "\" y=\"" << y << "\" font-size=\"12\">" << label << "</text>\n";
            y += 18;
        }
    }

    std::string finish()
    {
        svg_ << "</svg>\n";
        return svg_.str();
    }

  private:
    [[nodiscard]] double px(double x) const { return left_ + (x - x_.lo) / (x_.hi - x_.lo) * width_; }
    [[nodiscard]] double py(double y) const { return top_ + height_ - (y - y_.lo) / (y_.hi - y_.lo) * height_; }

    void axes(const std::string& xlabel, const std::string& ylabel)
    {
        svg_ << "<rect x=\"" << left_ << "\" y=\"" << top_ << "\" width=\"" << width_ << "\" height=\"" << height_
             << "\" fill=\"none\" stroke=\"black\"/>\n";
        const double sx = nice_step(x_.hi - x_.lo);
        for (double v = std::ceil(x_.lo / sx) * sx; v <= x_.hi + 1e-9 * sx; v += sx) {
            const double x = px(v);
            svg_ << "<line x1=\"" << format::fixed(x, 2) << "\" y1=\"" << top_ + height_ << "\" x2=\""
                 << format::fixed(x, 2) << "\" y2=\"" << top_ + height_ + 5 << "\" stroke=\"black\"/>\n"
                 << "<text x=\"" << format::fixed(x, 2) << "\" y=\"" << top_ + height_ + 18
                 << "\" text-anchor=\"middle\" font-size=\"11\">" << format::number(std::round(v / sx) * sx)
                 << "</text>\n";
        }
        const double sy = nice_step(y_.hi - y_.lo);
        for (double v = std::ceil(y_.lo / sy) * sy; v <= y_.hi + 1e-9 * sy; v += sy) {
            const double y = py(v);
            svg_ << "<line x1=\"" << left_ - 5 << "\" y1=\"" << format::fixed(y, 2) << "\" x2=\"" << left_
                 << "\" y2=\"" << format::fixed(y, 2) << "\" stroke=\"black\"/>\n"
                 << "<text x=\"" << left_ - 8 << "\" y=\"" << format::fixed(y + 4, 2)
                 << "\" text-anchor=\"end\" font-size=\"11\">" << format::number(std::round(v / sy) * sy)
                 << "</text>\n";
        }
        svg_ << "<text x=\"" << left_ + width_ / 2 << "\" y=\"" << top_ + height_ + 38
             << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n"
             << "<text x=\"16\" y=\"" << top_ + height_ / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
             << "transform=\"rotate(-90 16 " << top_ + height_ / 2 << ")\">" << ylabel << "</text>\n";
    }

    Range x_, y_;
    int width_ = 560, height_ = 380;
    int left_ = 70, right_ = 20, top_ = 30, bottom_ = 50;
    std::ostringstream svg_;
};

}  // namespace

std::string envelope_file_name(double t) { return "envelope_" + format::number(t) + ".csv"; }

void write_timeseries(const fs::path& path, const std::vector<driver::TimeSeriesRecord>& records)
{
    std::string text = std::string(kTimeseriesHeader) + "\n";
    for (const auto& r : records)
        text += format::number(r.t) + ',' + format::number(r.x_tip) + ',' + format::number(r.v_tip) + ',' +
                format::number(static_cast<long long>(r.node_count)) + ',' + format::number(r.ms_per_step) + '\n';
    write_file(path, text);
}

void write_envelope(const fs::path& path, const driver::Snapshot& snapshot)
{
    std::string text = std::string(kEnvelopeHeader) + "\n";
    const auto t = format::number(snapshot.t);
    for (std::size_t i = 0; i < snapshot.polyline.size(); ++i)
        text += t + ',' + format::number(static_cast<long long>(i)) + ',' + format::number(snapshot.polyline[i].x()) +
                ',' + format::number(snapshot.polyline[i].y()) + '\n';
    write_file(path, text);
}

std::vector<driver::TimeSeriesRecord> read_timeseries(const fs::path& path)
{
    std::vector<driver::TimeSeriesRecord> out;
    for (const auto& row : read_csv(path, kTimeseriesHeader))
        out.push_back({cell_double(row, 0, path), cell_double(row, 1, path), cell_double(row, 2, path),
                       static_cast<std::size_t>(cell_double(row, 3, path)), cell_double(row, 4, path)});
    return out;
}

driver::Snapshot read_envelope(const fs::path& path)
{
    driver::Snapshot s;
    bool first = true;
    for (const auto& row : read_csv(path, kEnvelopeHeader)) {
        if (first) s.t = cell_double(row, 0, path);
        first = false;
        s.polyline.emplace_back(cell_double(row, 2, path), cell_double(row, 3, path));
    }
    if (first) {
        // Headers only: recover t from the file name.
        auto stem = path.stem().string();
        if (const auto v = format::parse_double(stem.substr(stem.find('_') + 1))) s.t = *v;
    }
    return s;
}

std::string tip_velocity_svg(const std::vector<driver::RunArtifacts>& runs)
{
    Range x, y;
    for (const auto& r : runs)
        for (const auto& rec : r.records) {
            x.add(rec.x_tip);
            y.add(rec.v_tip);
        }
    if (y.lo <= y.hi) y.add(0.0);
    Plot plot(x, y, "Tip velocity", "x_tip", "v_tip");
    std::vector<std::pair<std::string, const char*>> legend;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const char* colour = kPalette[k % kPalette.size()];
        std::vector<Vec2> pts;
        for (const auto& rec : runs[k].records) pts.emplace_back(rec.x_tip, rec.v_tip);
        plot.polyline(pts, colour, false);
        legend.emplace_back(runs[k].solver, colour);
    }
    plot.legend(legend);
    return plot.finish();
}

std::string envelopes_svg(const std::vector<driver::RunArtifacts>& runs)
{
    Range x, y;
    for (const auto& r : runs)
        for (const auto& s : r.snapshots)
            for (const auto& p : s.polyline) {
                x.add(p.x());
                y.add(p.y());
            }
    Plot plot(x, y, "Envelope shapes", "x", "y", true);
    std::vector<std::pair<std::string, const char*>> legend;
    std::size_t colour_id = 0;
    for (const auto& r : runs)
        for (const auto& s : r.snapshots) {
            const char* colour = kPalette[colour_id++ % kPalette.size()];
            plot.polyline(s.polyline, colour, true);
            legend.emplace_back(r.solver + " t=" + format::number(s.t), colour);
        }
    plot.legend(legend);
    return plot.finish();
}

void emit_report(const std::vector<driver::RunArtifacts>& runs, const fs::path& out)
{
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());
    for (const auto& r : runs) {
        const auto dir = out / r.solver;
        write_timeseries(dir / "timeseries.csv", r.records);
        for (const auto& s : r.snapshots) write_envelope(dir / envelope_file_name(s.t), s);
    }
    write_file(out / "tip_velocity.svg", tip_velocity_svg(runs));
    write_file(out / "envelopes.svg", envelopes_svg(runs));
}

std::vector<driver::RunArtifacts> load_runs(const fs::path& out)
{
    std::vector<driver::RunArtifacts> runs;
    for (const char* solver : {"sharp", "diffuse"}) {
        const auto dir = out / solver;
        if (!fs::exists(dir / "timeseries.csv")) continue;
        driver::RunArtifacts r;
        r.solver = solver;
        r.records = read_timeseries(dir / "timeseries.csv");
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            const auto name = e.path().filename().string();
            if (name.rfind("envelope_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
        }
        for (const auto& f : files) r.snapshots.push_back(read_envelope(f));
        std::sort(r.snapshots.begin(), r.snapshots.end(),
                  [](const driver::Snapshot& a, const driver::Snapshot& b) { return a.t < b.t; });
        runs.push_back(std::move(r));
    }
    if (runs.empty()) throw IoError("no timeseries.csv found under " + out.string());
    return runs;
}

void regenerate_svgs(const fs::path& out)
{
    const auto runs = load_runs(out);
    write_file(out / "tip_velocity.svg", tip_velocity_svg(runs));
    write_file(out / "envelopes.svg", envelopes_svg(runs));
}

}  // namespace gem::report

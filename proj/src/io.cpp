#include "soilc/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace soilc {

std::string format_double(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line_no << ": " << what;
    throw IngestError(os.str());
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(path, line_no, "bad numeric value '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& path, int line_no) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(path, line_no, "bad integer '" + s + "'");
    return v;
}

std::ifstream open_or_fail(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError(path + ": cannot open");
    return in;
}

std::ofstream create_or_fail(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IngestError(path + ": cannot create");
    return out;
}

}  // namespace

FieldSeries ingest(const std::string& data_path, const std::string& schedule_path) {
    FieldSeries out;

    {
        auto in = open_or_fail(schedule_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            const auto cells = split_csv_line(line);
            if (line_no == 1 && !cells.empty() && cells[0] == "year") continue;
            if (cells.size() != 3) fail(schedule_path, line_no, "expected year,field,treatment");
            const int year = parse_int(cells[0], schedule_path, line_no);
            const int field = parse_int(cells[1], schedule_path, line_no);
            if (field < 1 || field > kNumFields)
                fail(schedule_path, line_no, "field must be 1..3");
            const auto treatment = treatment_from_string(cells[2]);
            if (!treatment) fail(schedule_path, line_no, "unknown treatment '" + cells[2] + "'");
            out.schedule.set(field - 1, year, *treatment);
        }
    }
    out.schedule.year_span();  // throws on empty/uneven coverage

    {
        auto in = open_or_fail(data_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            const auto cells = split_csv_line(line);
            if (line_no == 1) {
                if (cells.size() != 4 || cells[0] != "year" || cells[1] != "field" ||
                    cells[2] != "variable" || cells[3] != "value")
                    fail(data_path, line_no, "expected header year,field,variable,value");
                continue;
            }
            if (cells.size() != 4) fail(data_path, line_no, "expected year,field,variable,value");
            const int year = parse_int(cells[0], data_path, line_no);
            const int field = parse_int(cells[1], data_path, line_no);
            if (field < 1 || field > kNumFields) fail(data_path, line_no, "field must be 1..3");
            const auto kind = obs_kind_from_string(cells[2]);
            if (!kind) fail(data_path, line_no, "unknown variable '" + cells[2] + "'");
            const double value = parse_double(cells[3], data_path, line_no);
            if (!(value > 0.0)) fail(data_path, line_no, "observation must be positive");
            if (!out.schedule.covers(field - 1, year))
                fail(data_path, line_no, "year not covered by schedule");
            out.fields[field - 1].set(*kind, year, value);
        }
    }
    return out;
}

void write_data_csv(const std::string& path, const FieldSeries& data) {
    auto outf = create_or_fail(path);
    outf << "year,field,variable,value\n";
    const auto [lo, hi] = data.schedule.year_span();
    for (int year = lo; year <= hi; ++year)
        for (int f = 0; f < kNumFields; ++f)
            for (int k = 0; k < kNumObsKinds; ++k)
                if (auto v = data.fields[f].get(static_cast<ObsKind>(k), year))
                    outf << year << ',' << (f + 1) << ',' << to_string(static_cast<ObsKind>(k))
                         << ',' << format_double(*v) << '\n';
}

void write_schedule_csv(const std::string& path, const ManagementSchedule& schedule) {
    auto outf = create_or_fail(path);
    outf << "year,field,treatment\n";
    const auto [lo, hi] = schedule.year_span();
    for (int year = lo; year <= hi; ++year)
        for (int f = 0; f < kNumFields; ++f)
            outf << year << ',' << (f + 1) << ',' << to_string(schedule.at(f, year)) << '\n';
}

namespace {

std::vector<std::pair<std::string, int>> latent_columns(const ModelSpec& spec) {
    // (name, index into crop slice) with carbon columns offset by 100
    std::vector<std::pair<std::string, int>> cols = {{"X_GW", CropIx::GW}, {"X_W", CropIx::W}};
    if (spec.has_pasture()) cols.push_back({"X_P", CropIx::P});
    if (spec.has_sorghum()) {
        cols.push_back({"X_GS", CropIx::GS});
        cols.push_back({"X_S", CropIx::S});
    }
    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: cols.push_back({"X_C", 100 + CarbonIx::C}); break;
        case Pools::ThreePool:
            cols.push_back({"X_C", 100 + CarbonIx::C});
            cols.push_back({"X_B", 100 + CarbonIx::B3});
            break;
        case Pools::FivePool:
            cols.push_back({"X_D", 100 + CarbonIx::D});
            cols.push_back({"X_R", 100 + CarbonIx::R});
            cols.push_back({"X_H", 100 + CarbonIx::H});
            cols.push_back({"X_B", 100 + CarbonIx::B5});
            break;
    }
    if (spec.has_iom()) cols.push_back({"X_IOM", 200});
    return cols;
}

double latent_value(const LatentTrajectory& traj, int field, int t, int code) {
    if (code == 200) return traj.x_iom;
    if (code >= 100) return traj.carbon_at(field, t)[code - 100];
    return traj.crop_at(field, t)[code];
}

}  // namespace

void write_truth_csv(const std::string& path, const LatentTrajectory& truth,
                     const ModelSpec& spec) {
    auto outf = create_or_fail(path);
    outf << "year,field,variable,value\n";
    const auto cols = latent_columns(spec);
    for (int t = 0; t < truth.years; ++t)
        for (int f = 0; f < kNumFields; ++f)
            for (const auto& [name, code] : cols)
                outf << (truth.start_year + t) << ',' << (f + 1) << ',' << name << ','
                     << format_double(latent_value(truth, f, t, code)) << '\n';
}

void write_chain_csv(const std::string& path, const ChainOutput& chain) {
    auto outf = create_or_fail(path);
    outf << "sample";
    for (const auto& name : chain.param_names) outf << ',' << name;
    outf << '\n';
    for (size_t i = 0; i < chain.samples.size(); ++i) {
        outf << i;
        for (double v : chain.samples[i]) outf << ',' << format_double(v);
        outf << '\n';
    }
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_chain_csv(
    const std::string& path) {
    auto in = open_or_fail(path);
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (line_no == 1) {
            names.assign(cells.begin() + 1, cells.end());
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        for (size_t j = 1; j < cells.size(); ++j)
            row.push_back(parse_double(cells[j], path, line_no));
        if (row.size() != names.size()) fail(path, line_no, "wrong column count");
        samples.push_back(std::move(row));
    }
    return {names, samples};
}

void write_trajectories_csv(const std::string& path, const std::vector<LatentTrajectory>& trajs,
                            const ModelSpec& spec) {
    auto outf = create_or_fail(path);
    outf << "sample,year,field,variable,value\n";
    const auto cols = latent_columns(spec);
    for (size_t s = 0; s < trajs.size(); ++s)
        for (int t = 0; t < trajs[s].years; ++t)
            for (int f = 0; f < kNumFields; ++f)
                for (const auto& [name, code] : cols)
                    outf << s << ',' << (trajs[s].start_year + t) << ',' << (f + 1) << ',' << name
                         << ',' << format_double(latent_value(trajs[s], f, t, code)) << '\n';
}

std::vector<LatentTrajectory> read_trajectories_csv(const std::string& path,
                                                    const ModelSpec& spec) {
    auto in = open_or_fail(path);
    std::string line;
    int line_no = 0;
    std::vector<LatentTrajectory> trajs;
    int min_year = 0, max_year = 0;
    struct Row {
        int sample, year, field;
        std::string var;
        double value;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line_no == 1) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 5) fail(path, line_no, "expected sample,year,field,variable,value");
        Row r{parse_int(cells[0], path, line_no), parse_int(cells[1], path, line_no),
              parse_int(cells[2], path, line_no), cells[3],
              parse_double(cells[4], path, line_no)};
        if (rows.empty()) min_year = max_year = r.year;
        min_year = std::min(min_year, r.year);
        max_year = std::max(max_year, r.year);
        rows.push_back(std::move(r));
    }
    if (rows.empty()) return trajs;
    const int years = max_year - min_year + 1;
    const auto cols = latent_columns(spec);
    for (const auto& r : rows) {
        if (r.sample < 0) fail(path, 0, "negative sample index");
        while (static_cast<int>(trajs.size()) <= r.sample) {
            trajs.emplace_back();
            trajs.back().resize(spec, years);
            trajs.back().start_year = min_year;
        }
        auto& traj = trajs[static_cast<size_t>(r.sample)];
        const int t = r.year - min_year;
        int code = -1;
        for (const auto& [name, c] : cols)
            if (name == r.var) code = c;
        if (code < 0) fail(path, 0, "unknown latent variable '" + r.var + "'");
        if (code == 200)
            traj.x_iom = r.value;
        else if (code >= 100)
            traj.carbon_at(r.field - 1, t)[code - 100] = r.value;
        else
            traj.crop_at(r.field - 1, t)[code] = r.value;
    }
    return trajs;
}

void write_lfo_csv(const std::string& path, const LfoResult& result) {
    auto outf = create_or_fail(path);
    outf << "time,lpd_mean,lpd_sd\n";
    for (size_t i = 0; i < result.times.size(); ++i)
        outf << result.times[i] << ',' << format_double(result.lpd_mean[i]) << ','
             << format_double(result.lpd_sd[i]) << '\n';
    outf << "ELPD," << format_double(result.elpd_mean) << ',' << format_double(result.elpd_sd)
         << '\n';
}

std::map<std::string, std::string> read_config(const std::string& path) {
    auto in = open_or_fail(path);
    std::map<std::string, std::string> out;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw IngestError(path + ": expected key = value: " + t);
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

std::string config_hash(const std::map<std::string, std::string>& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : config) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace soilc

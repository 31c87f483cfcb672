#include "pvt/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pvt {

using nlohmann::json;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string tessellation_to_json(const SectionTessellation& tess) {
    json j;
    j["window"] = {tess.window.x, tess.window.y};
    j["cells"] = json::array();
    for (const Cell& c : tess.cells) {
        json cell;
        cell["vertices"] = json::array();
        for (const Vec2& v : c.poly.v) cell["vertices"].push_back({v.x, v.y});
        cell["visibility"] =
            c.visibility == Visibility::complete ? "complete" : "clipped";
        cell["generator"] = c.generator_id;
        j["cells"].push_back(std::move(cell));
    }
    return j.dump(2) + "\n";
}

SectionTessellation tessellation_from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("window") || !j.contains("cells"))
        throw std::runtime_error("tessellation JSON: missing window or cells");
    SectionTessellation tess;
    tess.window = {j["window"].at(0).get<double>(), j["window"].at(1).get<double>()};
    if (!(tess.window.x > 0.0 && tess.window.y > 0.0))
        throw std::runtime_error("tessellation JSON: nonpositive window");
    tess.window_area = tess.window.x * tess.window.y;
    tess.mode = BoundaryMode::bounded;
    int next_id = 0;
    for (const auto& jc : j["cells"]) {
        Cell c;
        for (const auto& jv : jc.at("vertices"))
            c.poly.v.push_back({jv.at(0).get<double>(), jv.at(1).get<double>()});
        if (c.poly.v.size() < 3)
            throw std::runtime_error("tessellation JSON: cell with < 3 vertices");
        c.poly.label.assign(c.poly.v.size(), 0);
        std::string vis = jc.at("visibility").get<std::string>();
        if (vis == "complete")
            c.visibility = Visibility::complete;
        else if (vis == "clipped")
            c.visibility = Visibility::clipped;
        else
            throw std::runtime_error("tessellation JSON: bad visibility " + vis);
        c.generator_id = jc.value("generator", next_id);
        ++next_id;
        tess.cells.push_back(std::move(c));
    }
    return tess;
}

void save_tessellation(const std::string& path, const SectionTessellation& tess) {
    write_text_file(path, tessellation_to_json(tess));
}

SectionTessellation load_tessellation(const std::string& path) {
    return tessellation_from_json(read_text_file(path));
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

void save_points_csv(const std::string& path,
                     const std::vector<std::pair<int, Vec2>>& rows) {
    std::ostringstream os;
    os << "cell_id,x,y\n";
    for (const auto& [id, p] : rows)
        os << id << "," << fmt(p.x) << "," << fmt(p.y) << "\n";
    write_text_file(path, os.str());
}

std::vector<std::pair<int, Vec2>> load_points_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty points CSV " + path);
    std::vector<std::pair<int, Vec2>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 3) throw std::runtime_error("bad points CSV row: " + line);
        rows.push_back({std::stoi(f[0]), {std::stod(f[1]), std::stod(f[2])}});
    }
    return rows;
}

void save_metrics_csv(const std::string& path,
                      const std::vector<CellMetrics>& metrics) {
    std::ostringstream os;
    os << "cell_id,area,perimeter,n_edges\n";
    for (std::size_t i = 0; i < metrics.size(); ++i)
        os << i << "," << fmt(metrics[i].area) << "," << fmt(metrics[i].perimeter)
           << "," << metrics[i].n_edges << "\n";
    write_text_file(path, os.str());
}

void save_diagram_csv(const std::string& path, const PersistenceDiagram& diag) {
    std::ostringstream os;
    os << "dimension,birth,death\n";
    for (const auto& p : diag.h0)
        os << "0," << fmt(p.birth) << "," << fmt(p.death) << "\n";
    for (const auto& p : diag.h1)
        os << "1," << fmt(p.birth) << "," << fmt(p.death) << "\n";
    write_text_file(path, os.str());
}

void save_landscape_csv(const std::string& path, const Landscape& landscape) {
    std::ostringstream os;
    os << "k,t,value\n";
    for (std::size_t k = 0; k < landscape.fns.size(); ++k)
        for (const auto& [t, v] : landscape.fns[k].pts)
            os << (k + 1) << "," << fmt(t) << "," << fmt(v) << "\n";
    write_text_file(path, os.str());
}

void save_quantile_csv(const std::string& path, const QuantileTable& table) {
    std::ostringstream os;
    os << "alpha,value\n";
    for (std::size_t i = 0; i < table.alpha.size(); ++i)
        os << table.alpha[i] << "," << fmt(table.value[i]) << "\n";
    write_text_file(path, os.str());
}

void save_null_table(const std::string& path, const NullTable& table) {
    json j;
    j["schema_version"] = table.schema_version;
    j["statistic"] = table.statistic;
    j["n2d"] = table.n2d;
    j["lambda"] = table.lambda;
    j["geometry"] = table.geometry;
    j["seed"] = table.seed;
    j["attempts_per_k"] = table.attempts_per_k;
    j["truncation_loss"] = table.truncation_loss;
    json w = json::object();
    for (const auto& [k, v] : table.weights_by_n3d) w[std::to_string(k)] = v;
    j["weights_by_n3d"] = std::move(w);
    json samples = json::array();
    for (const auto& s : table.samples)
        samples.push_back({s.value, s.n3d, s.weight});
    j["samples"] = std::move(samples);
    write_text_file(path, j.dump() + "\n");
}

NullTable load_null_table(const std::string& path) {
    json j = json::parse(read_text_file(path));
    NullTable table;
    table.schema_version = j.at("schema_version").get<int>();
    if (table.schema_version != 1)
        throw std::runtime_error("unsupported null table schema in " + path);
    table.statistic = j.at("statistic").get<std::string>();
    table.n2d = j.at("n2d").get<int>();
    table.lambda = j.at("lambda").get<double>();
    table.geometry = j.at("geometry").get<std::string>();
    table.seed = j.at("seed").get<std::uint64_t>();
    table.attempts_per_k = j.at("attempts_per_k").get<int>();
    table.truncation_loss = j.at("truncation_loss").get<double>();
    for (const auto& [k, v] : j.at("weights_by_n3d").items())
        table.weights_by_n3d[std::stoi(k)] = v.get<double>();
    for (const auto& s : j.at("samples"))
        table.samples.push_back(
            {s.at(0).get<double>(), s.at(1).get<int>(), s.at(2).get<double>()});
    return table;
}

}  // namespace pvt

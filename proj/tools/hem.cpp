#include "hem/catalog.hpp"
#include "hem/discriminants.hpp"
#include "hem/isometry.hpp"
#include "hem/json_io.hpp"
#include "hem/polytope.hpp"
#include "hem/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace hem;

namespace {

struct Input {
    std::string space, params_file, system_file;
};

struct Loaded {
    SpaceDescriptor desc;
    std::string hash;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string tsv_banner(std::uint64_t seed, const std::string& hash) {
    return "# hem " HEM_VERSION " seed=" + std::to_string(seed) + " input=" + hash + "\n";
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("malformed " + what + ": " + e.what());
    }
}

void require_one(const Input& in, bool allow_system) {
    const int n = !in.space.empty() + !in.params_file.empty() + !in.system_file.empty();
    if (n != 1 || (!allow_system && !in.system_file.empty()))
        throw CLI::ValidationError(allow_system ? "give exactly one of --space, --params, --system"
                                                : "give exactly one of --space, --params");
}

Loaded load_space(const Input& in, bool allow_long) {
    require_one(in, false);
    Loaded out;
    if (!in.space.empty()) {
        out.desc = lookup_space(in.space);
        out.hash = input_hash(dump(params_to_json(out.desc.params)));
    } else {
        const std::string text = read_file(in.params_file);
        Json j = parse_json(text, "parameter file");
        if (j.contains("space")) j = j["space"];
        if (j.contains("params")) j = j["params"];
        out.desc.name = std::filesystem::path(in.params_file).stem().string();
        out.desc.params = params_from_json(j);
        out.hash = input_hash(text);
    }
    if (out.desc.long_running && !allow_long)
        throw std::runtime_error(out.desc.name + " is beyond desk scale; pass --allow-long");
    return out;
}

void add_input(CLI::App* sub, Input& in, bool with_system) {
    sub->add_option("--space", in.space, "catalog name");
    sub->add_option("--params", in.params_file, "SpaceParameters JSON file");
    if (with_system) sub->add_option("--system", in.system_file, "Laurent system JSON file");
}

struct SolverFlags {
    std::uint64_t seed = 20240001;
    unsigned threads = 1;
    std::string precision = "double";
    bool no_certify = false;
    double max_step = 0.05;
    double min_step = 1e-14;

    SolveOptions options() const {
        SolveOptions o;
        o.seed = seed;
        o.threads = threads;
        o.precision = precision == "dd" ? Precision::dd : Precision::double_;
        o.certify = !no_certify;
        o.max_step = max_step;
        o.min_step = min_step;
        return o;
    }
};

void add_solver_flags(CLI::App* sub, SolverFlags& f) {
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--threads", f.threads, "worker cap for path tracking")->check(CLI::PositiveNumber);
    sub->add_option("--precision", f.precision, "double or dd (double-double reruns of failed paths)")
        ->check(CLI::IsMember({"double", "dd"}));
    sub->add_flag("--no-certify", f.no_certify, "skip Krawczyk certification");
    sub->add_option("--max-step", f.max_step, "largest path step")->check(CLI::PositiveNumber);
    sub->add_option("--min-step", f.min_step, "step floor")->check(CLI::PositiveNumber);
}

Json space_json(const SpaceDescriptor& d) {
    Json j;
    j["name"] = d.name;
    j["params"] = params_to_json(d.params);
    j["labels"] = d.labels;
    j["symmetry"] = d.symmetry;
    return j;
}

SpaceDescriptor space_from_json(const Json& j) {
    SpaceDescriptor d;
    d.name = j.value("name", std::string("custom"));
    d.params = params_from_json(j.at("params"));
    if (j.contains("labels")) d.labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("symmetry")) d.symmetry = j["symmetry"].get<std::vector<Permutation>>();
    if (d.name.rfind("flag-D", 0) == 0) d.known.classes_upper_bound_only = true;
    return d;
}

std::string solutions_tsv(const SolveReport& r) {
    std::ostringstream os;
    os << "index\tcluster\tin_torus\treal\tpositive\tcertified\tresidual\tcoords\n";
    char buf[96];
    for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        const auto& s = r.solutions[k];
        std::snprintf(buf, sizeof buf, "%.3e", s.residual);
        os << k + 1 << '\t' << s.cluster_size << '\t' << s.in_torus << '\t' << s.real << '\t' << s.positive << '\t'
           << s.certified << '\t' << buf << '\t';
        for (std::size_t j = 0; j < s.coords.size(); ++j) {
            if (s.real) std::snprintf(buf, sizeof buf, "%.10g", s.coords[j].real());
            else std::snprintf(buf, sizeof buf, "%.10g%+.10gi", s.coords[j].real(), s.coords[j].imag());
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

struct Counts {
    long torus = 0, real = 0, positive = 0, certified = 0;
};

Counts count(const SolveReport& r) {
    Counts c;
    for (const auto& s : r.solutions) {
        c.torus += s.in_torus;
        c.real += s.real;
        c.positive += s.positive;
        c.certified += s.certified;
    }
    return c;
}

bool is_generic_support(const EinsteinSystem& sys) {
    const auto gen = generic_einstein_supports(sys.params.ell());
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const auto s = support(sys.equations[i]);
        if (std::set<ExponentVector>(gen[i].begin(), gen[i].end()) != s) return false;
    }
    return true;
}

std::vector<std::vector<double>> read_table(const std::string& path, const SpaceDescriptor& d) {
    std::string resolved = path;
    if (!std::filesystem::exists(resolved)) {
        const auto alt = std::filesystem::path(HEM_DATA_DIR) / "tables" / path;
        if (std::filesystem::exists(alt)) resolved = alt.string();
    }
    std::istringstream in(read_file(resolved));
    std::string line;
    std::vector<int> column_of;
    std::vector<std::vector<double>> rows;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line);
        if (column_of.empty()) {
            if (cells.size() != d.labels.size()) throw std::runtime_error("table header does not match the space");
            for (const auto& label : d.labels) {
                const auto it = std::find(cells.begin(), cells.end(), label);
                if (it == cells.end()) throw std::runtime_error("table lacks column " + label);
                column_of.push_back(static_cast<int>(it - cells.begin()));
            }
            continue;
        }
        if (cells.size() != column_of.size()) throw std::runtime_error("table row has the wrong width");
        std::vector<double> x;
        for (int c : column_of) x.push_back(std::stod(cells[static_cast<std::size_t>(c)]));
        rows.push_back(std::move(x));
    }
    return rows;
}

std::string default_table(const SpaceDescriptor& d) {
    if (d.name.rfind("flag-", 0) != 0) throw std::runtime_error("no published table for " + d.name);
    std::string t = d.name.substr(5);
    for (auto& ch : t) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return t + ".csv";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogeneous Einstein metrics: systems, BKK bounds, solving and classification"};
    app.set_version_flag("--version", HEM_VERSION);
    app.require_subcommand(1);

    bool allow_long = false;
    std::string output;
    app.add_flag("--allow-long", allow_long, "permit runs beyond desk scale");

    auto* cat = app.add_subcommand("catalog", "list or export catalog descriptors");
    cat->require_subcommand(1);
    auto* cat_list = cat->add_subcommand("list", "TSV of names, ell and computed BKK bounds");
    std::string export_name;
    auto* cat_export = cat->add_subcommand("export", "SpaceParameters JSON of a descriptor");
    cat_export->add_option("name", export_name, "catalog name")->required();
    cat_export->add_option("-o,--output", output, "output path");

    Input in;
    auto* build = app.add_subcommand("build", "emit the Laurent system");
    add_input(build, in, false);
    std::string form = "scaled";
    build->add_option("--form", form, "scaled or raw")->check(CLI::IsMember({"scaled", "raw"}));
    build->add_option("-o,--output", output, "output path");

    auto* bkk = app.add_subcommand("bkk", "mixed volume of the system supports");
    add_input(bkk, in, true);
    std::uint64_t bkk_seed = 20240001;
    bkk->add_option("--seed", bkk_seed, "lift seed");

    SolverFlags sf;
    std::string tsv_path;
    auto* solve_cmd = app.add_subcommand("solve", "polyhedral homotopy solve");
    add_input(solve_cmd, in, false);
    add_solver_flags(solve_cmd, sf);
    solve_cmd->add_option("-o,--output", output, "report JSON path");
    solve_cmd->add_option("--tsv", tsv_path, "solutions TSV path");

    std::string report_file;
    double match_tol = 1e-6;
    auto* classify_cmd = app.add_subcommand("classify", "isometry classes of positive solutions");
    add_input(classify_cmd, in, false);
    classify_cmd->add_option("--report", report_file, "report JSON written by solve");
    add_solver_flags(classify_cmd, sf);
    classify_cmd->add_option("--tol", match_tol, "matching tolerance");
    classify_cmd->add_option("-o,--output", output, "output path");

    auto* disc = app.add_subcommand("discriminant", "BKK discriminant factors and facial probes");
    add_input(disc, in, false);
    std::uint64_t disc_seed = 1;
    disc->add_option("--seed", disc_seed, "probe seed");
    disc->add_option("-o,--output", output, "output path");

    std::string table;
    double verify_tol = 5e-3, ke_tol = 2e-3;
    auto* verify = app.add_subcommand("verify", "check published metrics");
    add_input(verify, in, false);
    verify->add_option("--table", table, "CSV of metrics (header of root labels)");
    verify->add_option("--tol", verify_tol, "relative Einstein tolerance");
    verify->add_option("--ke-tol", ke_tol, "additivity tolerance");
    verify->add_option("-o,--output", output, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cat_list) {
            std::ostringstream os;
            os << "name\tell\tbkk\ttorus\treal\tpositive\tclasses\n";
            auto opt = [](const std::optional<long>& v) { return v ? std::to_string(*v) : std::string("-"); };
            for (const auto& name : catalog_names()) {
                const auto d = lookup_space(name);
                std::string mv = "-";
                if (!d.long_running || allow_long) {
                    std::vector<PointSet> sup;
                    const auto sys = einstein_system(d.params);
                    for (const auto& f : sys.equations.equations()) {
                        const auto s = support(f);
                        sup.emplace_back(s.begin(), s.end());
                    }
                    mv = mixed_volume(sup, 20240001).get_str();
                }
                os << d.name << '\t' << d.params.ell() << '\t' << mv << '\t' << opt(d.known.torus) << '\t'
                   << opt(d.known.real) << '\t' << opt(d.known.positive) << '\t' << opt(d.known.classes)
                   << (d.known.classes_upper_bound_only ? "+" : "") << '\n';
            }
            std::cout << os.str();
            return 0;
        }
        if (*cat_export) {
            const auto d = lookup_space(export_name);
            Json j = artifact_header(0, input_hash(dump(params_to_json(d.params))));
            j["space"] = space_json(d);
            write_out(output, dump(j));
            return 0;
        }
        if (*build) {
            const auto L = load_space(in, true);
            const auto sys = einstein_system(L.desc.params, form == "raw" ? SystemForm::raw : SystemForm::scaled);
            Json j = artifact_header(0, L.hash);
            j["form"] = form;
            j["system"] = system_to_json(sys.equations);
            write_out(output, dump(j));
            return 0;
        }
        if (*bkk) {
            std::vector<PointSet> sup;
            std::optional<EinsteinSystem> es;
            std::string name;
            if (!in.system_file.empty()) {
                require_one(in, true);
                Json j = parse_json(read_file(in.system_file), "system file");
                if (j.contains("system")) j = j["system"];
                const auto sys = complex_system_from_json(j);
                if (!sys.is_square()) throw std::runtime_error("system is not square");
                for (const auto& f : sys.equations()) {
                    const auto s = support(f);
                    sup.emplace_back(s.begin(), s.end());
                }
                name = in.system_file;
            } else {
                const auto L = load_space(in, allow_long);
                es = einstein_system(L.desc.params);
                for (const auto& f : es->equations.equations()) {
                    const auto s = support(f);
                    sup.emplace_back(s.begin(), s.end());
                }
                name = L.desc.name;
            }
            const Integer mv = mixed_volume(sup, bkk_seed);
            std::cout << name << ": MV=" << mv.get_str();
            if (es && is_generic_support(*es)) {
                const unsigned k = static_cast<unsigned>(es->params.ell() - 1);
                const Integer dk = delannoy(k);
                std::cout << ", Delannoy D_" << k << "=" << dk.get_str() << ", " << (dk == mv ? "agree" : "DISAGREE");
            }
            std::cout << '\n';
            return 0;
        }
        if (*solve_cmd) {
            const auto L = load_space(in, allow_long);
            const auto opts = sf.options();
            const auto rep = solve(einstein_system(L.desc.params), opts);
            Json j = artifact_header(opts.seed, L.hash);
            j["space"] = space_json(L.desc);
            j["report"] = report_to_json(rep);
            write_out(output, dump(j));
            if (!tsv_path.empty()) write_out(tsv_path, tsv_banner(opts.seed, L.hash) + solutions_tsv(rep));
            const Counts c = count(rep);
            std::cerr << L.desc.name << ": bkk " << rep.bkk << ", converged " << rep.converged << ", diverged "
                      << rep.diverged << ", failed " << rep.failed << "; torus " << c.torus << ", real " << c.real
                      << ", positive " << c.positive << ", certified " << c.certified << '\n';
            return rep.failed > 0 ? 2 : 0;
        }
        if (*classify_cmd) {
            SpaceDescriptor desc;
            SolveReport rep;
            std::string hash;
            std::uint64_t seed = sf.seed;
            if (!report_file.empty()) {
                if (!in.space.empty() || !in.params_file.empty())
                    throw CLI::ValidationError("give either --report or a space input");
                const std::string text = read_file(report_file);
                const Json j = parse_json(text, "report");
                desc = space_from_json(j.at("space"));
                if (const auto known = catalog_names(); std::find(known.begin(), known.end(), desc.name) != known.end())
                    desc.known = lookup_space(desc.name).known;
                rep = report_from_json(j.at("report"));
                seed = rep.seed;
                hash = input_hash(text);
            } else {
                const auto L = load_space(in, allow_long);
                desc = L.desc;
                hash = L.hash;
                rep = solve(einstein_system(desc.params), sf.options());
            }
            const auto c = classify(desc, rep.solutions, match_tol);
            std::string text = tsv_banner(seed, hash);
            text += "# " + desc.name + ": " + std::to_string(c.classes.size()) + " classes, group order " +
                    std::to_string(c.group_order_used) + (c.upper_bound_only ? ", upper bound only" : "") +
                    (c.collision ? ", orbit collision flagged" : "") + "\n";
            text += classification_tsv(c);
            write_out(output, text);
            return rep.failed > 0 ? 2 : 0;
        }
        if (*disc) {
            const auto L = load_space(in, true);
            ProbeOptions po;
            po.seed = disc_seed;
            const auto r = discriminant_report(L.desc.params, po);
            Json j = artifact_header(disc_seed, L.hash);
            j["space"] = L.desc.name;
            j["linear_factors_nonzero"] = r.linear_factors_nonzero;
            if (r.special_factor) j["special_factor"] = rational_to_json(*r.special_factor);
            Json factors = Json::array();
            for (const auto& f : r.factors) factors.push_back({{"name", f.name}, {"value", rational_to_json(f.value)}});
            j["factors"] = std::move(factors);
            j["verdict"] = to_string(r.verdict);
            j["faces_probed"] = r.faces_probed;
            if (r.witness) {
                Json w = Json::array();
                for (const auto& z : *r.witness) w.push_back(Json::array({z.real(), z.imag()}));
                j["witness"] = std::move(w);
            }
            j["notes"] = r.notes;
            write_out(output, dump(j));
            return 0;
        }
        if (*verify) {
            const auto L = load_space(in, true);
            const auto rows = read_table(table.empty() ? default_table(L.desc) : table, L.desc);
            std::optional<std::function<bool(const std::vector<double>&)>> ke;
            if (L.desc.name.rfind("flag-", 0) == 0) ke = kaehler_einstein_candidate(L.desc, ke_tol);
            std::ostringstream os;
            os << tsv_banner(0, L.hash) << "row\tis_einstein\tlambda\tresidual\tadditive\n";
            bool all = true;
            char buf[64];
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const auto pc = verify_published(L.desc, rows[k], verify_tol);
                all = all && pc.is_einstein;
                std::snprintf(buf, sizeof buf, "%.6f\t%.3e", pc.lambda, pc.residual);
                os << k + 1 << '\t' << pc.is_einstein << '\t' << buf << '\t' << (ke ? ((*ke)(rows[k]) ? "1" : "0") : "-")
                   << '\n';
            }
            write_out(output, os.str());
            return all ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyknot/anneal.hpp"
#include "polyknot/classify.hpp"
#include "polyknot/fitting.hpp"
#include "polyknot/homfly.hpp"
#include "polyknot/montecarlo.hpp"
#include "polyknot/polygon.hpp"
#include "polyknot/thickness.hpp"
#include "polyknot/thresholds.hpp"
#include "polyknot/tube.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using polyknot::kInf;

std::string fmt17(double v) {
    if (v == kInf) return "\"inf\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt4(double v) {
    if (v == kInf) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// FNV-1a over file bytes, for the run manifest.
std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ManifestInfo {
    std::string subcommand;
    std::vector<std::string> flags;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void write_manifest(const ManifestInfo& m, const std::string& out_path) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["flags"] = m.flags;
    j["seed"] = m.seed;
    nlohmann::json hashes = nlohmann::json::object();
    for (const auto& f : m.inputs) hashes[f] = file_hash(f);
    j["input_hashes"] = hashes;
    j["tool_version"] = kToolVersion;
    j["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - m.start).count();
    std::ofstream out(out_path + ".manifest.json");
    out << j.dump(2) << "\n";
}

void emit(const std::string& text, const std::string& out_path, const ManifestInfo& m) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw polyknot::DomainError("cannot open output file: " + out_path);
        out << text;
        out.close();
        write_manifest(m, out_path);
    }
}

std::string point_pair_json(const std::optional<polyknot::PointPair>& pp) {
    if (!pp) return "null";
    std::ostringstream os;
    os << "{\"x\": {\"edge\": " << pp->x.edge << ", \"t\": " << fmt17(pp->x.t)
       << "}, \"y\": {\"edge\": " << pp->y.edge << ", \"t\": " << fmt17(pp->y.t)
       << "}, \"dist\": " << fmt17(pp->dist) << "}";
    return os.str();
}

std::string thickness_json(const polyknot::ThicknessReport& rep) {
    std::ostringstream os;
    os << "{\n"
       << "  \"minrad\": " << fmt17(rep.minrad) << ",\n"
       << "  \"minrad_vertex\": " << rep.minrad_vertex << ",\n"
       << "  \"dcsd\": " << fmt17(rep.dcsd) << ",\n"
       << "  \"scsd\": " << fmt17(rep.scsd) << ",\n"
       << "  \"mdcsd\": " << fmt17(rep.mdcsd) << ",\n"
       << "  \"radius\": " << fmt17(rep.radius) << ",\n"
       << "  \"ropelength\": " << fmt17(rep.ropelength) << ",\n"
       << "  \"witnesses\": {\n"
       << "    \"dcsd\": " << point_pair_json(rep.dcsd_pair) << ",\n"
       << "    \"scsd\": " << point_pair_json(rep.scsd_pair) << ",\n"
       << "    \"mdcsd\": " << point_pair_json(rep.mdcsd_pair) << "\n"
       << "  }\n"
       << "}\n";
    return os.str();
}

std::string threshold_json(const polyknot::ThresholdReport& rep) {
    std::ostringstream os;
    os << "{\n"
       << "  \"edge\": " << fmt17(rep.edge) << ",\n"
       << "  \"radius\": " << fmt17(rep.radius) << ",\n"
       << "  \"t4\": " << fmt17(rep.t4) << ",\n"
       << "  \"t5\": " << fmt17(rep.t5) << ",\n"
       << "  \"t6\": " << fmt17(rep.t6) << ",\n"
       << "  \"equivalence_radius\": " << fmt17(rep.equivalence_radius) << ",\n"
       << "  \"trefoil_band\": [" << fmt17(rep.trefoil_band_lo) << ", "
       << fmt17(rep.trefoil_band_hi) << "],\n"
       << "  \"trefoil_fig8_band\": [" << fmt17(rep.tref_fig8_band_lo) << ", "
       << fmt17(rep.tref_fig8_band_hi) << "]\n"
       << "}\n";
    return os.str();
}

std::string threshold_table(const polyknot::ThresholdReport& rep) {
    std::ostringstream os;
    os << "quantity              value\n"
       << "edge                  " << fmt4(rep.edge) << "\n"
       << "radius                " << fmt4(rep.radius) << "\n"
       << "t4                    " << fmt4(rep.t4) << "\n"
       << "t5                    " << fmt4(rep.t5) << "\n"
       << "t6                    " << fmt4(rep.t6) << "\n"
       << "equivalence_radius    " << fmt4(rep.equivalence_radius) << "\n"
       << "trefoil_band          [" << fmt4(rep.trefoil_band_lo) << ", "
       << fmt4(rep.trefoil_band_hi) << "]\n"
       << "trefoil_fig8_band     [" << fmt4(rep.tref_fig8_band_lo) << ", "
       << fmt4(rep.tref_fig8_band_hi) << "]\n";
    return os.str();
}

std::string tally_csv(const std::vector<polyknot::PerturbationTally>& tallies,
                      const std::vector<int>& ns) {
    std::ostringstream os;
    os << "host,n,r,N,seed,polynomial,label,count,frequency\n";
    for (size_t i = 0; i < tallies.size(); ++i) {
        const auto& t = tallies[i];
        auto row = [&](const std::string& poly, const std::string& label,
                       std::uint64_t count) {
            os << "\"" << t.host << "\"," << ns[i] << ",";
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", t.radius);
            os << buf << "," << t.samples << "," << t.seed << ",\"" << poly << "\",\""
               << label << "\"," << count << ",";
            std::snprintf(buf, sizeof(buf), "%.17g",
                          static_cast<double>(count) / static_cast<double>(t.samples));
            os << buf << "\n";
        };
        for (const auto& [poly, count] : t.counts)
            row(poly, polyknot::classify_label(poly), count);
        if (t.overflow > 0) row("", "overflow", t.overflow);
        if (t.degenerate > 0) row("", "degenerate", t.degenerate);
    }
    return os.str();
}

std::string tally_json(const std::vector<polyknot::PerturbationTally>& tallies,
                       const std::vector<int>& ns) {
    std::ostringstream os;
    os << "[\n";
    for (size_t i = 0; i < tallies.size(); ++i) {
        const auto& t = tallies[i];
        os << "  {\"host\": \"" << t.host << "\", \"n\": " << ns[i]
           << ", \"r\": " << fmt17(t.radius) << ", \"N\": " << t.samples
           << ", \"seed\": " << t.seed << ",\n   \"counts\": {";
        bool first = true;
        for (const auto& [poly, count] : t.counts) {
            if (!first) os << ", ";
            os << "\"" << poly << "\": " << count;
            first = false;
        }
        os << "},\n   \"overflow\": " << t.overflow
           << ", \"degenerate\": " << t.degenerate
           << ", \"distinct_polynomials\": " << t.distinct_polynomials() << "}";
        os << (i + 1 < tallies.size() ? ",\n" : "\n");
    }
    os << "]\n";
    return os.str();
}

polyknot::PolygonalKnot load_host(const std::string& host_file, int ngon,
                                  ManifestInfo& manifest, std::string& host_desc) {
    if (!host_file.empty()) {
        manifest.inputs.push_back(host_file);
        host_desc = host_file;
        return polyknot::read_knot_file(host_file);
    }
    if (ngon < 3) throw CLI::ValidationError("--host or --ngon (>= 3) is required");
    host_desc = "ngon:" + std::to_string(ngon);
    return polyknot::regular_ngon(ngon, 1.0);
}

int run(int argc, char** argv) {
    CLI::App app{"polygonal knot thickness, perturbation thresholds, and HOMFLY "
                 "Monte Carlo toolkit"};
    app.require_subcommand(1);

    ManifestInfo manifest;
    for (int i = 1; i < argc; ++i) manifest.flags.push_back(argv[i]);

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    // gen-ngon
    auto* gen = app.add_subcommand("gen-ngon", "write a regular n-gon knot file");
    int gen_n = 0;
    double gen_radius = 1.0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--radius", gen_radius, "circumradius (default 1)");
    gen->add_option("--out", gen_out, "output knot file")->required();

    // thickness
    auto* thick = app.add_subcommand("thickness", "thickness report of a knot file");
    std::string thick_in, thick_out;
    thick->add_option("knotfile", thick_in, "input knot file")->required();
    thick->add_option("--out", thick_out, "output JSON path (default stdout)");

    // thresholds
    auto* thr = app.add_subcommand("thresholds", "perturbation coalescence thresholds");
    int thr_ngon = 0;
    double thr_edge = 0.0, thr_radius = 0.0;
    std::string thr_format = "json", thr_out;
    thr->add_option("--ngon", thr_ngon, "regular n-gon vertex count");
    thr->add_option("--edge", thr_edge, "edge length E");
    thr->add_option("--radius", thr_radius, "thickness radius R");
    thr->add_option("--format", thr_format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    thr->add_option("--out", thr_out, "output path (default stdout)");

    // tube-check
    auto* tube = app.add_subcommand("tube-check", "verify the radius-r tube is embedded");
    std::string tube_in, tube_out;
    double tube_radius = 0.0;
    tube->add_option("knotfile", tube_in, "input knot file")->required();
    tube->add_option("--radius", tube_radius, "tube radius")->required();
    tube->add_option("--out", tube_out, "output JSON path (default stdout)");

    // homfly
    auto* hom = app.add_subcommand("homfly", "HOMFLY polynomial and knot class");
    std::string hom_in;
    std::uint64_t hom_seed = 12345;
    int hom_cap = 200;
    hom->add_option("knotfile", hom_in, "input knot file")->required();
    hom->add_option("--seed", hom_seed, "projection direction seed");
    hom->add_option("--cap", hom_cap, "crossing cap");

    // perturb
    auto* pert = app.add_subcommand("perturb", "sample ball perturbations and classify");
    std::string pert_host, pert_out, pert_format = "csv";
    int pert_ngon = 0;
    double pert_radius = 0.0;
    std::uint64_t pert_samples = 1000, pert_seed = 1;
    pert->add_option("--host", pert_host, "host knot file");
    pert->add_option("--ngon", pert_ngon, "regular n-gon host");
    pert->add_option("--radius", pert_radius, "perturbation ball radius")->required();
    pert->add_option("--samples", pert_samples, "sample count");
    pert->add_option("--seed", pert_seed, "RNG seed");
    pert->add_option("--out", pert_out, "output path (default stdout)");
    pert->add_option("--format", pert_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    pert->add_option("--threads", threads, "worker thread count");

    // scan-radius
    auto* scanr = app.add_subcommand("scan-radius", "perturbation tallies over radii");
    std::string scanr_host, scanr_out, scanr_format = "csv";
    int scanr_ngon = 0;
    std::vector<double> scanr_radii;
    std::uint64_t scanr_samples = 1000, scanr_seed = 1;
    scanr->add_option("--host", scanr_host, "host knot file");
    scanr->add_option("--ngon", scanr_ngon, "regular n-gon host");
    scanr->add_option("--radii", scanr_radii, "ascending radii")->required()->delimiter(',');
    scanr->add_option("--samples", scanr_samples, "samples per radius");
    scanr->add_option("--seed", scanr_seed, "RNG seed");
    scanr->add_option("--out", scanr_out, "output path (default stdout)");
    scanr->add_option("--format", scanr_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    scanr->add_option("--threads", threads, "worker thread count");

    // scan-edges
    auto* scane = app.add_subcommand("scan-edges",
                                     "perturbation tallies per host at its own radius");
    std::vector<std::string> scane_hosts;
    std::vector<int> scane_ngons;
    std::string scane_out, scane_format = "csv";
    std::uint64_t scane_samples = 1000, scane_seed = 1;
    scane->add_option("--host", scane_hosts, "host knot files")->delimiter(',');
    scane->add_option("--ngon", scane_ngons, "regular n-gon vertex counts")->delimiter(',');
    scane->add_option("--samples", scane_samples, "samples per host");
    scane->add_option("--seed", scane_seed, "RNG seed");
    scane->add_option("--out", scane_out, "output path (default stdout)");
    scane->add_option("--format", scane_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    scane->add_option("--threads", threads, "worker thread count");

    // anneal
    auto* ann = app.add_subcommand("anneal", "ropelength simulated annealing");
    std::string ann_in, ann_out, ann_log;
    polyknot::AnnealSchedule sched;
    ann->add_option("--input", ann_in, "input knot file")->required();
    ann->add_option("--epochs", sched.epochs, "epoch count");
    ann->add_option("--moves", sched.moves_per_epoch, "moves per epoch");
    ann->add_option("--t0", sched.initial_temperature, "initial temperature");
    ann->add_option("--cooling", sched.cooling, "cooling factor in (0,1)");
    ann->add_option("--amplitude", sched.initial_amplitude, "initial move amplitude");
    ann->add_option("--seed", sched.seed, "RNG seed");
    ann->add_option("--out", ann_out, "output knot file")->required();
    ann->add_option("--log", ann_log, "progress CSV path");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a decay curve to label frequencies");
    std::string fit_in, fit_label = "Unknot", fit_out;
    fit->add_option("--input", fit_in, "scan-edges CSV")->required();
    fit->add_option("--label", fit_label, "knot label to fit (default Unknot)");
    fit->add_option("--out", fit_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (gen->parsed()) {
        manifest.subcommand = "gen-ngon";
        polyknot::write_knot_file(gen_out, polyknot::regular_ngon(gen_n, gen_radius));
        write_manifest(manifest, gen_out);
        return 0;
    }
    if (thick->parsed()) {
        manifest.subcommand = "thickness";
        manifest.inputs.push_back(thick_in);
        const auto K = polyknot::read_knot_file(thick_in);
        emit(thickness_json(polyknot::thickness_report(K)), thick_out, manifest);
        return 0;
    }
    if (thr->parsed()) {
        manifest.subcommand = "thresholds";
        polyknot::ThresholdReport rep;
        if (thr_ngon >= 3)
            rep = polyknot::regular_ngon_report(thr_ngon);
        else if (thr_edge > 0 && thr_radius > 0)
            rep = polyknot::threshold_report(thr_edge, thr_radius);
        else
            throw CLI::ValidationError("need --ngon or both --edge and --radius");
        emit(thr_format == "json" ? threshold_json(rep) : threshold_table(rep), thr_out,
             manifest);
        return 0;
    }
    if (tube->parsed()) {
        manifest.subcommand = "tube-check";
        manifest.inputs.push_back(tube_in);
        const auto K = polyknot::read_knot_file(tube_in);
        const auto v = polyknot::verify_embedded(K, tube_radius);
        std::ostringstream os;
        os << "{\"embedded\": " << (v.embedded ? "true" : "false");
        if (!v.embedded) {
            os << ", \"witness\": {\"cell_a\": " << v.cell_a << ", \"cell_b\": " << v.cell_b
               << ", \"point_a\": [" << fmt17(v.point_a.x) << ", " << fmt17(v.point_a.y)
               << ", " << fmt17(v.point_a.z) << "], \"point_b\": [" << fmt17(v.point_b.x)
               << ", " << fmt17(v.point_b.y) << ", " << fmt17(v.point_b.z)
               << "], \"dist\": " << fmt17(v.dist) << "}";
        }
        os << "}\n";
        emit(os.str(), tube_out, manifest);
        return 0;
    }
    if (hom->parsed()) {
        manifest.subcommand = "homfly";
        manifest.inputs.push_back(hom_in);
        const auto K = polyknot::read_knot_file(hom_in);
        const auto p = polyknot::homfly_of_knot(K, hom_seed, hom_cap);
        std::cout << p.to_string() << "\n" << polyknot::classify(p) << "\n";
        return 0;
    }
    if (pert->parsed()) {
        manifest.subcommand = "perturb";
        manifest.seed = pert_seed;
        std::string host_desc;
        const auto K = load_host(pert_host, pert_ngon, manifest, host_desc);
        auto tally = polyknot::sample(K, pert_radius, pert_samples, pert_seed, threads,
                                      200, host_desc);
        const std::vector<int> ns{K.size()};
        emit(pert_format == "csv" ? tally_csv({tally}, ns) : tally_json({tally}, ns),
             pert_out, manifest);
        return 0;
    }
    if (scanr->parsed()) {
        manifest.subcommand = "scan-radius";
        manifest.seed = scanr_seed;
        std::string host_desc;
        const auto K = load_host(scanr_host, scanr_ngon, manifest, host_desc);
        for (size_t i = 1; i < scanr_radii.size(); ++i)
            if (scanr_radii[i] <= scanr_radii[i - 1])
                throw CLI::ValidationError("--radii must be ascending");
        auto tallies = polyknot::radius_scan(K, scanr_radii, scanr_samples, scanr_seed,
                                             threads, 200, host_desc);
        const std::vector<int> ns(tallies.size(), K.size());
        emit(scanr_format == "csv" ? tally_csv(tallies, ns) : tally_json(tallies, ns),
             scanr_out, manifest);
        return 0;
    }
    if (scane->parsed()) {
        manifest.subcommand = "scan-edges";
        manifest.seed = scane_seed;
        std::vector<polyknot::PolygonalKnot> hosts;
        std::vector<std::string> descs;
        for (const auto& f : scane_hosts) {
            manifest.inputs.push_back(f);
            hosts.push_back(polyknot::read_knot_file(f));
            descs.push_back(f);
        }
        for (int n : scane_ngons) {
            hosts.push_back(polyknot::regular_ngon(n, 1.0));
            descs.push_back("ngon:" + std::to_string(n));
        }
        if (hosts.empty()) throw CLI::ValidationError("need --host and/or --ngon");
        std::vector<double> radii;
        for (const auto& K : hosts) radii.push_back(polyknot::thickness_radius(K));
        auto rows = polyknot::edge_scan(hosts, radii, scane_samples, scane_seed, threads);
        std::vector<polyknot::PerturbationTally> tallies;
        std::vector<int> ns;
        for (size_t i = 0; i < rows.size(); ++i) {
            rows[i].tally.host = descs[i];
            tallies.push_back(rows[i].tally);
            ns.push_back(rows[i].n);
        }
        emit(scane_format == "csv" ? tally_csv(tallies, ns) : tally_json(tallies, ns),
             scane_out, manifest);
        return 0;
    }
    if (ann->parsed()) {
        manifest.subcommand = "anneal";
        manifest.seed = sched.seed;
        manifest.inputs.push_back(ann_in);
        const auto K0 = polyknot::read_knot_file(ann_in);
        std::vector<polyknot::AnnealRecord> log;
        const auto best = polyknot::anneal(K0, sched, &log);
        polyknot::write_knot_file(ann_out, best);
        write_manifest(manifest, ann_out);
        if (!ann_log.empty()) {
            std::ofstream lf(ann_log);
            lf << "epoch,temperature,current,best\n";
            for (const auto& r : log) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.epoch,
                              r.temperature, r.current, r.best);
                lf << buf;
            }
        }
        return 0;
    }
    if (fit->parsed()) {
        manifest.subcommand = "fit";
        manifest.inputs.push_back(fit_in);
        std::ifstream in(fit_in);
        if (!in) throw polyknot::DomainError("cannot open input file: " + fit_in);
        std::string line;
        std::getline(in, line);  // header
        std::vector<std::pair<double, double>> pts;
        while (std::getline(in, line)) {
            // host,n,r,N,seed,polynomial,label,count,frequency with quoted
            // host/polynomial/label fields
            std::vector<std::string> fields;
            std::string cur;
            bool quoted = false;
            for (char c : line) {
                if (c == '"')
                    quoted = !quoted;
                else if (c == ',' && !quoted) {
                    fields.push_back(cur);
                    cur.clear();
                } else
                    cur += c;
            }
            fields.push_back(cur);
            if (fields.size() != 9) continue;
            if (fields[6] != fit_label) continue;
            pts.push_back({std::stod(fields[1]), std::stod(fields[8])});
        }
        std::sort(pts.begin(), pts.end());
        const auto f = polyknot::fit_decay(pts);
        std::ostringstream os;
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "# a=%.17g b=%.17g k=%.17g l=%.17g n0=%.17g residual=%.17g "
                      "converged=%d dropped_zero=%d\n",
                      f.a, f.b, f.k, f.l, f.n0, f.residual, f.converged ? 1 : 0,
                      f.dropped_zero_points);
        os << buf << "n,fitted\n";
        const double nmin = pts.front().first, nmax = pts.back().first;
        for (int i = 0; i <= 100; ++i) {
            const double n = nmin + (nmax - nmin) * i / 100.0;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", n, f.evaluate(n));
            os << buf;
        }
        emit(os.str(), fit_out, manifest);
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const polyknot::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

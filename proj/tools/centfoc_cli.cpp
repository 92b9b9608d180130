// Batch front door: read a job document, run the return-map pipeline and
// (optionally) the ODE verification, and emit a JSON report or a residual
// table for plotting.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "centfoc/centfoc.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"first-return map computation for planar nilpotent center-focus systems"};

    std::string input_path, output_path, eps_csv;
    int order = -1;
    bool do_verify = false, no_timestamp = false, table = false;
    double tol = -1.0;

    app.add_option("--input", input_path, "job document (JSON)")->required();
    app.add_option("--output", output_path, "report path (default: job's output_path or stdout)");
    app.add_option("--order", order, "series truncation order override");
    app.add_flag("--verify", do_verify, "run the ODE oracle verification");
    app.add_option("--epsilons", eps_csv, "comma-separated epsilon list override");
    app.add_option("--tol", tol, "oracle integration tolerance override");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
    app.add_flag("--table", table,
                 "emit (eps, Z_series, Z_numeric, residual) rows instead of a report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    centfoc::json jdoc;
    {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "error: cannot open " << input_path << "\n";
            return 2;
        }
        try {
            in >> jdoc;
        } catch (const std::exception& e) {
            std::cerr << "error: invalid JSON: " << e.what() << "\n";
            return 2;
        }
    }

    centfoc::JobDocument doc;
    try {
        doc = centfoc::parse_job(jdoc);
    } catch (const centfoc::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    }
    if (order > 0) doc.order = order;
    if (do_verify) doc.verify = true;
    if (tol > 0) doc.oracle_tol = tol;
    if (!eps_csv.empty()) {
        doc.epsilons.clear();
        std::stringstream ss(eps_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) doc.epsilons.push_back(std::stod(tok));
    }
    if (!output_path.empty()) doc.output_path = output_path;

    try {
        if (table) {
            centfoc::ReturnMapResult rm = centfoc::return_map(doc.spec, doc.order);
            std::ostream* os = &std::cout;
            std::ofstream fout;
            if (!doc.output_path.empty()) {
                fout.open(doc.output_path);
                os = &fout;
            }
            (*os) << "eps\tZ_series\tZ_numeric\tresidual\n";
            (*os).precision(17);
            for (double eps : doc.epsilons) {
                const double zs = centfoc::series_eval(rm.Z, eps);
                const auto oc = centfoc::numeric_return(doc.spec, eps, doc.oracle_tol);
                (*os) << eps << '\t' << zs << '\t' << oc.z_return << '\t'
                      << oc.z_return - zs << '\n';
            }
            return 0;
        }

        centfoc::json rep = centfoc::run_job(doc, !no_timestamp);
        if (!doc.output_path.empty()) {
            std::ofstream out(doc.output_path);
            out << rep.dump(2) << "\n";
        } else {
            std::cout << rep.dump(2) << "\n";
        }
        return 0;
    } catch (const centfoc::AssumptionViolation& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    } catch (const centfoc::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

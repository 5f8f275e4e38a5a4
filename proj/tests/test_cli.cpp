// CLI contract checks; argv[1] is the path to the binary.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "painleve/csv.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::cerr << "FAILED: " << what << "\n";
        ++failures;
    }
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    const std::string full = cmd + " > /tmp/cli_out.txt 2> /tmp/cli_err.txt";
    const int rc = std::system(full.c_str());
    std::ifstream f("/tmp/cli_out.txt");
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) rows.push_back(painleve::csv::split_csv_line(line));
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <painleve-binary>\n";
        return 1;
    }
    const std::string bin = argv[1];

    {
        // analytic map with the reference inputs: sigma must be -1
        const RunResult r = run(bin +
                                " connect --eps 1 --alpha1 0.9 --alpha2 0.8"
                                " --phi1 1.5707963 --phi2 1.0471976");
        expect(r.exit_code == 0, "connect exits 0");
        const auto rows = parse_csv(r.out);
        expect(rows.size() == 2, "connect emits header + one row");
        expect(rows[0][0] == "eps" && rows[0][5] == "sigma" && rows[0][6] == "I1",
               "connect header fields");
        expect(rows[1][5] == "-1", "connect sigma is -1 for the reference inputs");
    }
    {
        // validation failure: eps <= 0 must exit 2 and name the precondition
        const RunResult r = run(bin + " connect --eps -1 --alpha1 0.9 --alpha2 0.8"
                                      " --phi1 1.0 --phi2 1.0");
        expect(r.exit_code == 2, "connect with eps < 0 exits 2");
        std::ifstream e("/tmp/cli_err.txt");
        std::stringstream ss;
        ss << e.rdbuf();
        expect(ss.str().find("eps") != std::string::npos, "error message names eps");
    }
    {
        // unknown flag: usage on stderr, exit 2
        const RunResult r = run(bin + " connect --definitely-not-a-flag 1");
        expect(r.exit_code == 2, "unknown flag exits 2");
    }
    {
        // quadrature constant at moderate resolution
        const RunResult r = run(bin + " c1 --resolution 512");
        expect(r.exit_code == 0, "c1 exits 0");
        const auto rows = parse_csv(r.out);
        expect(rows.size() == 2 && rows[0][1] == "c1", "c1 header");
        const double v = std::atof(rows[1][1].c_str());
        expect(std::abs(v - 1.166) < 0.01, "c1 value near 1.166");
        const RunResult s = run(bin + " c1 --resolution 512 --serial");
        expect(parse_csv(s.out)[1][1] == rows[1][1], "serial c1 is bit-identical");
    }
    {
        // simulate -> fit round trip through files
        const RunResult sim = run(bin +
                                  " simulate --eps 1 --alpha1 0.8 --alpha2 0.6 --phi1 1.2"
                                  " --phi2 1.5707963 --x0 -300 --x1 300 --record-from 170"
                                  " -o /tmp/cli_traj.csv");
        expect(sim.exit_code == 0, "simulate exits 0");
        std::ifstream tf("/tmp/cli_traj.csv");
        std::string header;
        std::getline(tf, header);
        expect(header == "x,u1,du1,u2,du2", "trajectory header is exact");

        const RunResult fit = run(bin +
                                  " fit --input /tmp/cli_traj.csv --eps 1"
                                  " --window-lo 180 --window-hi 300");
        expect(fit.exit_code == 0, "fit exits 0");
        const auto rows = parse_csv(fit.out);
        expect(rows.size() == 2, "fit emits one row");
        expect(rows[0] == std::vector<std::string>{"eps", "sigma", "I1", "I2", "sin_phi1",
                                                   "cos_phi1", "sin_phi2", "cos_phi2",
                                                   "rms_residual"},
               "fit header matches the documented contract");
        const double sp1 = std::atof(rows[1][4].c_str());
        const double cp1 = std::atof(rows[1][5].c_str());
        expect(std::abs(sp1 * sp1 + cp1 * cp1 - 1.0) < 1e-12, "fit row phases lie on the circle");

        // zero-curvature residuals over the simulated trajectory
        const RunResult lax = run(bin + " lax-check --input /tmp/cli_traj.csv --eps 1"
                                        " --samples 100 --seed 3");
        expect(lax.exit_code == 0, "lax-check exits 0");
        const auto lrows = parse_csv(lax.out);
        expect(lrows[0][1] == "max_frobenius", "lax-check header");
        expect(std::atof(lrows[1][1].c_str()) < 1e-8, "residual below 1e3 * rel_tol");
    }
    {
        // missing trajectory file is a validation error
        const RunResult r = run(bin + " fit --input /tmp/does_not_exist.csv --eps 1");
        expect(r.exit_code == 2, "missing input exits 2");
    }
    {
        // spectrum scan emits the documented columns
        const RunResult r = run(bin + " spectrum --x -16 --eps 1 --alpha1 0.1 --alpha2 0.1"
                                      " --phi1 1.0471975511965976 --phi2 2.3561944901923449"
                                      " --t-lo -4 --t-hi 4 --count 41");
        expect(r.exit_code == 0, "spectrum exits 0");
        const auto rows = parse_csv(r.out);
        expect(rows.size() == 42, "spectrum emits one row per scan point");
        expect(rows[0] == std::vector<std::string>{"t", "lambda1", "lambda2", "lambda3"},
               "spectrum header is exact");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double l1 = std::atof(rows[i][1].c_str());
            const double l2 = std::atof(rows[i][2].c_str());
            const double l3 = std::atof(rows[i][3].c_str());
            expect(l1 <= l2 && l2 <= l3, "spectrum rows sorted ascending");
        }
    }
    {
        // outgoing-side spectrum from the final model, with the exposing shift
        const RunResult r = run(bin + " spectrum --x 10 --eps 1.2 --from-final --sigma -1"
                                      " --rho 0.12 --amp 0.2 --t-lo -3 --t-hi 3 --count 21"
                                      " --expose-shift");
        expect(r.exit_code == 0, "final-model spectrum exits 0");
        expect(parse_csv(r.out).size() == 22, "final-model spectrum row count");
    }
    {
        // averages: header and reproducibility under an explicit seed
        const RunResult a = run(bin + " average --action 1e-3 --eps 1 --samples 20000 --seed 7");
        const RunResult b = run(bin + " average --action 1e-3 --eps 1 --samples 20000 --seed 7");
        expect(a.exit_code == 0, "average exits 0");
        expect(a.out == b.out, "average output is reproducible for a fixed seed");
        const auto rows = parse_csv(a.out);
        expect(rows[0][6] == "mean_I1" && rows[0][8] == "mean_I2", "average header");
        const double m1 = std::atof(rows[1][6].c_str());
        expect(std::abs(m1 - 0.3118) < 0.01, "average mean_I1 near the exact value");

        // per-sample dump sink
        const RunResult d = run(bin + " average --action 1e-2 --eps 1 --samples 5"
                                      " --pipeline numeric --x0 -300 --x1 300"
                                      " --abs-tol 1e-10 --rel-tol 1e-10 --dump /tmp/cli_dump.csv");
        expect(d.exit_code == 0, "numeric average with dump exits 0");
        std::ifstream df("/tmp/cli_dump.csv");
        std::string l;
        int nl = 0;
        while (std::getline(df, l))
            if (!l.empty()) ++nl;
        expect(nl == 6, "dump file holds header + 5 samples");
    }
    {
        // local crossing-model spectra and the default fit window
        const RunResult r = run(bin + " spectrum --x -16 --eps 1 --dom plus --t-lo -2 --t-hi 2"
                                      " --count 11 --alpha1 0.2 --alpha2 0.1 --phi1 0.4 --phi2 1.1");
        expect(r.exit_code == 0, "crossing-model spectrum exits 0");
        expect(parse_csv(r.out).size() == 12, "crossing-model spectrum row count");

        const RunResult f = run(bin + " fit --input /tmp/cli_traj.csv --eps 1");
        expect(f.exit_code == 0, "fit with the default window exits 0");
    }
    {
        // scan: analytic pipeline, alpha2 = 0 keeps the I2 column at zero
        const RunResult r = run(bin + " scan --sweep eps --lo 0.05 --hi 5 --count 5"
                                      " --alpha1 0.9 --alpha2 0 --phi1 1.1 --phi2 0.3"
                                      " --pipeline analytic");
        expect(r.exit_code == 0, "scan exits 0");
        const auto rows = parse_csv(r.out);
        expect(rows.size() == 6, "scan emits header + 5 rows");
        for (std::size_t i = 1; i < rows.size(); ++i)
            expect(std::abs(std::atof(rows[i][4].c_str())) < 1e-12, "I2_an column is zero");
    }
    {
        // config file provides defaults, flags override
        std::ofstream cfg("/tmp/cli_cfg.ini");
        cfg << "# reference run\n[connect]\neps = 2.5\nalpha1 = 0.5\n";
        cfg.close();
        const RunResult r = run(bin + " --config /tmp/cli_cfg.ini connect --alpha1 0.7"
                                      " --alpha2 0 --phi1 1.0 --phi2 0.5");
        expect(r.exit_code == 0, "config run exits 0");
        const auto rows = parse_csv(r.out);
        expect(std::atof(rows[1][0].c_str()) == 2.5, "config supplies eps");
        expect(std::atof(rows[1][1].c_str()) == 0.7, "command line overrides config");
    }
    {
        // thread-count independence of the counter-based sampler
        const RunResult one = run(bin + " --threads 1 average --action 1e-3 --eps 1"
                                        " --samples 30000 --seed 11");
        const RunResult four = run(bin + " --threads 4 average --action 1e-3 --eps 1"
                                         " --samples 30000 --seed 11");
        expect(one.out == four.out, "averages are independent of the thread count");
    }
    {
        // degrees flag converts angle inputs
        const RunResult deg = run(bin + " connect --eps 1 --alpha1 0.9 --alpha2 0.8"
                                        " --phi1 90 --phi2 60 --degrees");
        const RunResult rad = run(bin + " connect --eps 1 --alpha1 0.9 --alpha2 0.8"
                                        " --phi1 1.5707963267948966 --phi2 1.0471975511965976");
        const auto a = parse_csv(deg.out), b = parse_csv(rad.out);
        const double Ia = std::atof(a[1][6].c_str()), Ib = std::atof(b[1][6].c_str());
        expect(std::abs(Ia - Ib) < 1e-12, "degrees conversion matches radians");
    }

    if (failures == 0) std::puts("all CLI contract checks passed");
    return failures == 0 ? 0 : 1;
}

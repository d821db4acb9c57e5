// Copyright 2026 The cavo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cavo/fidelity.h"
#include "cavo/linked_cluster.h"
#include "cavo/local_spectrum.h"
#include "cavo/parallel.h"
#include "cavo/series_analysis.h"
#include "cavo/takahashi.h"

#ifndef CAVO_VERSION
#define CAVO_VERSION "dev"
#endif

using namespace cavo;

namespace {

struct Range {
    double min = 0, max = 0;
    int steps = 1;

    double at(int i) const { return steps == 1 ? min : min + (max - min) * i / (steps - 1); }
    std::vector<double> values() const {
        std::vector<double> v;
        for (int i = 0; i < steps; i++) v.push_back(at(i));
        return v;
    }
};

Range parse_range(const std::string &text, const char *name) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    try {
        if (parts.size() == 1) {
            r.min = r.max = std::stod(parts[0]);
        } else if (parts.size() == 3) {
            r.min = std::stod(parts[0]);
            r.max = std::stod(parts[1]);
            r.steps = std::stoi(parts[2]);
        } else {
            throw std::invalid_argument("shape");
        }
    } catch (const std::exception &) {
        throw std::invalid_argument(std::string(name) + " expects min:max:steps or a single value, got '" + text + "'");
    }
    if (!std::isfinite(r.min) || !std::isfinite(r.max)) throw std::invalid_argument(std::string(name) + ": not finite");
    if (r.steps < 1) throw std::invalid_argument(std::string(name) + ": steps must be >= 1");
    if (r.min > r.max) throw std::invalid_argument(std::string(name) + ": min must not exceed max");
    if (r.steps == 1 && r.min != r.max) throw std::invalid_argument(std::string(name) + ": one step needs min == max");
    return r;
}

std::vector<double> parse_list(const std::string &text, const char *name) {
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        try {
            size_t used;
            v.push_back(std::stod(p, &used));
            if (used != p.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw std::invalid_argument(std::string(name) + ": bad number '" + p + "'");
        }
    }
    if (v.empty()) throw std::invalid_argument(std::string(name) + ": empty list");
    return v;
}

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Config {
    std::string command;
    std::string lambda_xz, lambda_zz, hz, temps, series_file, out, flavor = "gamma";
    int order = -1;
    int k_steps = 33;
    double threshold = kDefaultThreshold;
    bool threshold_given = false;
    bool long_run = false;
};

class Output {
   public:
    explicit Output(const Config &c) {
        if (!c.out.empty()) {
            file_.open(c.out);
            if (!file_) throw std::runtime_error("cannot open output file " + c.out);
        }
    }
    std::ostream &os() { return file_.is_open() ? file_ : std::cout; }

   private:
    std::ofstream file_;
};

void header(std::ostream &os, const Config &c, const std::string &what, const std::vector<std::string> &extra = {}) {
    os << "# cavo " << CAVO_VERSION << " " << c.command << ": " << what << "\n";
    os << "# config:";
    if (!c.lambda_xz.empty()) os << " --lambda-xz " << c.lambda_xz;
    if (!c.lambda_zz.empty()) os << " --lambda-zz " << c.lambda_zz;
    if (!c.hz.empty()) os << " --hz " << c.hz;
    if (!c.temps.empty()) os << " --temps " << c.temps;
    if (c.order >= 0) os << " --order " << c.order;
    if (c.threshold_given) os << " --threshold " << num(c.threshold);
    if (!c.series_file.empty()) os << " --series-file " << c.series_file;
    if (c.long_run) os << " --long";
    os << "\n# units: energies and couplings in g, temperatures in g/k_B\n";
    for (const auto &e : extra) os << "# " << e << "\n";
}

void progress(const std::string &msg) { std::cerr << "[cavo] " << msg << std::endl; }

// ---------------------------------------------------------------------------------------

int cmd_spectrum(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0:1:101" : c.lambda_xz, "--lambda-xz");
    if (lx.min < 0) throw std::invalid_argument("--lambda-xz must be >= 0");
    auto vals = lx.values();
    std::vector<std::string> rows(vals.size());
    parallel_for(vals.size(), [&](size_t i) {
        SiteSpectrum s = diagonalize_site(vals[i], 0);
        SiteScalars sc = site_overlaps(s);
        std::string row = num(vals[i]);
        for (double e : s.energies) row += "," + num(e);
        row += "," + num(sc.gap) + "," + num(sc.c) + "," + num(sc.overlap0);
        rows[i] = row;
    });
    Output out(c);
    auto &os = out.os();
    header(os, c, "site energies E_0..E_15, gap, c and overlap0 versus lambda_xz");
    os << "lambda_xz";
    for (int i = 0; i < kSiteDim; i++) os << ",E" << i;
    os << ",gap,c,overlap0\n";
    for (auto &r : rows) os << r << "\n";
    return 0;
}

int cmd_fidelity(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0:1:201" : c.lambda_xz, "--lambda-xz");
    if (lx.min < 0) throw std::invalid_argument("--lambda-xz must be >= 0");
    auto temps = parse_list(c.temps.empty() ? "0,1e-4,2.18e-4,1e-3" : c.temps, "--temps");
    for (double t : temps) {
        if (!(t >= 0)) throw std::invalid_argument("--temps must be >= 0");
    }
    std::vector<std::string> extra;
    if (c.threshold_given) {
        TemperatureBound b = max_temperature(c.threshold);
        extra.push_back("threshold " + num(c.threshold) + ": T_max=" + num(b.t_max) + " lambda_opt=" + num(b.lambda_opt));
        for (double t : temps) {
            WorkingPoint w = optimal_working_point(t);
            extra.push_back("T=" + num(t) + ": lambda_opt=" + num(w.lambda_opt) + " d_max=" + num(w.d_max));
        }
    }
    auto vals = lx.values();
    std::vector<std::string> rows(vals.size());
    parallel_for(vals.size(), [&](size_t i) {
        std::string row = num(vals[i]);
        for (double t : temps) row += "," + num(d_unperturbed({vals[i], 0, 0, t}).d);
        rows[i] = row;
    });
    Output out(c);
    auto &os = out.os();
    header(os, c, "fidelity per site d(lambda_xz) at h_z = lambda_zz = 0, one column per temperature", extra);
    os << "lambda_xz";
    for (double t : temps) os << ",d_T=" << num(t);
    os << "\n";
    for (auto &r : rows) os << r << "\n";
    return 0;
}

int cmd_zfield_map(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0:1:101" : c.lambda_xz, "--lambda-xz");
    Range hz = parse_range(c.hz.empty() ? "0:5e-5:51" : c.hz, "--hz");
    if (lx.min < 0) throw std::invalid_argument("--lambda-xz must be >= 0");
    auto temps = parse_list(c.temps.empty() ? "0" : c.temps, "--temps");
    if (temps.size() != 1 || temps[0] < 0) throw std::invalid_argument("--temps takes a single temperature >= 0 here");
    std::vector<std::string> extra;
    if (c.threshold_given) {
        try {
            CouplingBound b = hz_max(c.threshold, temps[0]);
            extra.push_back("threshold " + num(c.threshold) + ": h_z_max=" + num(b.value) + " lambda_opt=" + num(b.lambda_opt));
        } catch (const UnreachableThresholdError &) {
            extra.push_back("threshold " + num(c.threshold) + ": unreachable at this temperature");
        }
    }
    auto xs = lx.values(), hs = hz.values();
    std::vector<std::string> rows(xs.size());
    parallel_for(xs.size(), [&](size_t i) {
        std::string row = num(xs[i]);
        for (double h : hs) row += "," + num(d_zfield({xs[i], h, 0, temps[0]}).d);
        rows[i] = row;
    });
    Output out(c);
    auto &os = out.os();
    header(os, c, "fidelity per site d matrix, rows lambda_xz, columns h_z, T=" + num(temps[0]), extra);
    os << "lambda_xz\\h_z";
    for (double h : hs) os << "," << num(h);
    os << "\n";
    for (auto &r : rows) os << r << "\n";
    return 0;
}

int cmd_zz_map(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0.01:1:100" : c.lambda_xz, "--lambda-xz");
    Range lz = parse_range(c.lambda_zz.empty() ? "0:0.01:51" : c.lambda_zz, "--lambda-zz");
    if (lx.min <= 0) throw std::invalid_argument("--lambda-xz must be > 0 for the zz map");
    auto temps = parse_list(c.temps.empty() ? "0.001" : c.temps, "--temps");
    if (temps.size() != 1 || temps[0] < 0) throw std::invalid_argument("--temps takes a single temperature >= 0 here");
    TfimGapModel gap = tfim_gap_model(c.series_file);
    std::vector<std::string> extra = {
        std::string("TFIM gap: ") + (gap.external ? "external series, dlogPade [6,6]" : "internal order-5 series, dlogPade [2,2]") +
            ", lambda_c=" + num(gap.critical_point()),
        "cells beyond the critical line (or where d_TFIM is untrusted) are nan; lambda_zz_crit uses ratio " +
            num(kTfimCriticalCoupling)};
    if (c.threshold_given) {
        try {
            CouplingBound b = lambda_zz_max(c.threshold, temps[0]);
            extra.push_back("threshold " + num(c.threshold) + ": lambda_zz_max=" + num(b.value) +
                            " lambda_opt=" + num(b.lambda_opt));
        } catch (const UnreachableThresholdError &) {
            extra.push_back("threshold " + num(c.threshold) + ": unreachable at this temperature");
        }
    }
    auto xs = lx.values(), zs = lz.values();
    std::vector<std::string> rows(xs.size());
    parallel_for(xs.size(), [&](size_t i) {
        std::string row = num(xs[i]);
        for (double z : zs) {
            double d;
            try {
                d = d_zz({xs[i], 0, z, temps[0]}, gap).d;
            } catch (const std::domain_error &) {
                d = std::nan("");
            }
            row += "," + num(d);
        }
        row += "," + num(critical_line(xs[i]));
        rows[i] = row;
    });
    Output out(c);
    auto &os = out.os();
    header(os, c, "fidelity per site d matrix, rows lambda_xz, columns lambda_zz, T=" + num(temps[0]), extra);
    os << "lambda_xz\\lambda_zz";
    for (double z : zs) os << "," << num(z);
    os << ",lambda_zz_crit\n";
    for (auto &r : rows) os << r << "\n";
    return 0;
}

int cmd_dispersion(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0.5" : c.lambda_xz, "--lambda-xz");
    if (lx.steps != 1 || !(lx.min > 0)) throw std::invalid_argument("--lambda-xz takes a single value > 0 here");
    Range lz = parse_range(c.lambda_zz.empty() ? "-0.003:0.006:4" : c.lambda_zz, "--lambda-zz");
    int order = c.order < 0 ? kMaxHoppingOrder : c.order;
    if (order < 1 || order > kMaxHoppingOrder) throw std::invalid_argument("--order must be 1..5 for the dispersion");
    if (c.k_steps < 2) throw std::invalid_argument("--k-steps must be >= 2");
    progress("hopping amplitudes to order " + std::to_string(order));
    auto table = hzz_hopping(order, lx.min);
    Output out(c);
    auto &os = out.os();
    header(os, c, "one-particle dispersion omega(k) from hopping series, k in [-pi, pi]^2");
    os << "lambda_zz,kx,ky,omega\n";
    for (double z : lz.values()) {
        for (int i = 0; i < c.k_steps; i++) {
            double kx = -std::numbers::pi + 2 * std::numbers::pi * i / (c.k_steps - 1);
            for (int j = 0; j < c.k_steps; j++) {
                double ky = -std::numbers::pi + 2 * std::numbers::pi * j / (c.k_steps - 1);
                os << num(z) << "," << num(kx) << "," << num(ky) << ","
                   << num(dispersion_series(table, kx, ky).evaluate(z)) << "\n";
            }
        }
    }
    return 0;
}

int cmd_tables(const Config &c) {
    Range lx = parse_range(c.lambda_xz.empty() ? "0.1:1:10" : c.lambda_xz, "--lambda-xz");
    if (!(lx.min > 0)) throw std::invalid_argument("--lambda-xz must be > 0 for the tables");
    int gap_order = kMaxHoppingOrder;
    int tfim_fid = c.long_run ? kMaxTfimFidelityOrder : kDefaultTfimFidelityOrder;
    if (c.order >= 0) {
        if (c.order > kDefaultTfimFidelityOrder && !c.long_run) throw std::invalid_argument("fidelity order > 8 needs --long");
        if (c.order % 2 || c.order < 2 || c.order > kMaxTfimFidelityOrder) {
            throw std::invalid_argument("--order sets the TFIM fidelity order: even, 2..12");
        }
        tfim_fid = c.order;
    }
    Output out(c);
    auto &os = out.os();
    header(os, c, "gap coefficients c_i f_i, fidelity coefficients and Takahashi term counts");

    progress("TFIM gap series");
    RationalSeries tg = tfim_gap_series(gap_order);
    os << "table,row,c1f1,c2f2,c3f3,c4f4,c5f5\n";
    os << "gap,tfim";
    for (int i = 1; i <= gap_order; i++) os << "," << num(to_double(tg[i]));
    os << "\n";
    auto xs = lx.values();
    std::vector<std::string> rows(xs.size());
    parallel_for(xs.size(), [&](size_t i) {
        progress("gap series at lambda_xz=" + num(xs[i]));
        auto g = gap_series(hzz_hopping(gap_order, xs[i]));
        std::string row = "gap," + num(xs[i]);
        for (double v : normalized_gap_coefficients(g, xs[i])) row += "," + num(v);
        rows[i] = row;
    });
    for (auto &r : rows) os << r << "\n";

    progress("TFIM fidelity series to order " + std::to_string(tfim_fid));
    FidelitySeries tf = fidelity_series(tfim_fid, FidelityTarget::tfim_polarized);
    os << "table,row";
    for (int i = 2; i <= tfim_fid; i += 2) os << ",c" << i;
    os << "\nfidelity_exact,tfim";
    for (int i = 2; i <= tfim_fid; i += 2) os << "," << to_string((*tf.exact)[i]);
    os << "\n";
    os << "table,row,c2_normalized,c4_normalized\n";
    os << "fidelity,tfim," << num(to_double((*tf.exact)[2])) << "," << num(to_double(tf.exact->coeff(4))) << "\n";
    std::vector<std::string> frows(xs.size());
    parallel_for(xs.size(), [&](size_t i) {
        auto f = fidelity_series(kMaxHzzFidelityOrder, FidelityTarget::hzz_cluster_state, xs[i]);
        auto n = f.normalized();
        frows[i] = "fidelity," + num(xs[i]) + "," + num(n[0]) + "," + num(n[1]);
    });
    for (auto &r : frows) os << r << "\n";

    os << "table,flavor,order,terms\n";
    for (Flavor f : {Flavor::gamma, Flavor::h_eff, Flavor::h_eff_pvp_zero}) {
        progress(std::string("counting ") + flavor_name(f) + " terms");
        auto counts = count_terms(f, order_cap(f));
        os << "takahashi," << flavor_name(f) << "," << order_cap(f) << "," << cumulative(counts) << "\n";
    }
    return 0;
}

int cmd_critical(const Config &c) {
    TfimGapModel gap = tfim_gap_model(c.series_file);
    Output out(c);
    auto &os = out.os();
    std::vector<std::string> extra = {
        std::string(gap.external ? "external order-13 TFIM gap series, dlogPade [6,6]" : "internal order-5 TFIM gap series, dlogPade [2,2]") +
        ": lambda_c=" + num(gap.critical_point()) + " exponent=" + num(gap.dlog.residue)};
    header(os, c, "critical lambda_zz: low-energy estimate and dlogPade [2,2] of the full-model gap", extra);
    if (c.lambda_xz.empty()) return 0;
    Range lx = parse_range(c.lambda_xz, "--lambda-xz");
    if (!(lx.min > 0) || lx.max > 1) throw std::invalid_argument("--lambda-xz must lie in (0, 1]");
    auto xs = lx.values();
    std::vector<std::string> rows(xs.size());
    parallel_for(xs.size(), [&](size_t i) {
        rows[i] = num(xs[i]) + "," + num(critical_line(xs[i], gap.critical_point())) + "," +
                  num(corrected_critical_line(xs[i]));
    });
    os << "lambda_xz,lambda_zz_crit_low_energy,lambda_zz_crit_corrected\n";
    for (auto &r : rows) os << r << "\n";
    return 0;
}

int cmd_takahashi(const Config &c) {
    Flavor f = parse_flavor(c.flavor);
    int order = c.order < 0 ? 4 : c.order;
    if (order < 0 || order > order_cap(f)) throw std::invalid_argument("--order exceeds the cap for this flavor");
    if (order >= 12 && !c.long_run) throw std::invalid_argument("generation at order >= 12 needs --long");
    EffectiveExpansion e = generate(f, order);
    Output out(c);
    write_expansion(out.os(), e);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"cavo: cluster-state fidelity, Takahashi expansions and linked-cluster series"};
    app.require_subcommand(1);
    Config c;
    auto common = [&](CLI::App *s, bool ranges) {
        if (ranges) {
            s->add_option("--lambda-xz", c.lambda_xz, "min:max:steps (or one value)");
            s->add_option("--lambda-zz", c.lambda_zz, "min:max:steps (or one value)");
            s->add_option("--hz", c.hz, "min:max:steps (or one value)");
            s->add_option("--temps", c.temps, "comma-separated temperatures");
        }
        s->add_option("--order", c.order, "series order");
        auto *t = s->add_option("--threshold", c.threshold, "fidelity threshold (default 0.986)");
        t->each([&](const std::string &) { c.threshold_given = true; });
        s->add_option("--series-file", c.series_file, "external order-13 TFIM gap series");
        s->add_option("--out", c.out, "output path (default stdout)");
        s->add_flag("--long", c.long_run, "allow long-running orders");
    };
    struct Cmd {
        const char *name, *help;
        int (*run)(const Config &);
    };
    const Cmd cmds[] = {
        {"spectrum", "site energies, gap, c and overlap0 over a lambda_xz grid", cmd_spectrum},
        {"fidelity", "d(lambda_xz) curves for several temperatures; T_max with --threshold", cmd_fidelity},
        {"zfield-map", "d over (lambda_xz, h_z)", cmd_zfield_map},
        {"zz-map", "d over (lambda_xz, lambda_zz) with the critical line", cmd_zz_map},
        {"dispersion", "omega(k) surfaces for several lambda_zz", cmd_dispersion},
        {"tables", "gap and fidelity coefficient tables, Takahashi term counts", cmd_tables},
        {"critical", "critical points from dlogPade", cmd_critical},
        {"takahashi", "write a Takahashi expansion in the cache format", cmd_takahashi},
    };
    std::vector<std::pair<CLI::App *, const Cmd *>> subs;
    for (const Cmd &cmd : cmds) {
        CLI::App *s = app.add_subcommand(cmd.name, cmd.help);
        common(s, true);
        if (std::string(cmd.name) == "dispersion") s->add_option("--k-steps", c.k_steps, "k points per direction");
        if (std::string(cmd.name) == "takahashi") s->add_option("--flavor", c.flavor, "gamma, heff or heff_pvp0");
        subs.emplace_back(s, &cmd);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "cavo: error: " << e.what() << "\n";
        return 2;
    }
    if (c.threshold_given && !(c.threshold > 0 && c.threshold < 1)) {
        std::cerr << "cavo: error: --threshold must lie in (0, 1)\n";
        return 2;
    }
    for (auto &[s, cmd] : subs) {
        if (!s->parsed()) continue;
        c.command = cmd->name;
        try {
            return cmd->run(c);
        } catch (const std::invalid_argument &e) {
            std::cerr << "cavo: error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception &e) {
            std::cerr << "cavo: error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}

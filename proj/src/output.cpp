#include "eitmem/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace eitmem {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += num(v);
        first = false;
    }
    out += '\n';
}

std::vector<double> unit_peak(std::vector<double> v) {
    const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    if (peak > 0.0)
        for (double& x : v) x /= peak;
    return v;
}

void dump_value(const nlohmann::ordered_json& v, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            out += nl;
            bool first = true;
            for (const auto& item : v.items()) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                out += nlohmann::json(item.key()).dump();
                out += sep;
                dump_value(item.value(), indent, depth + 1, out);
            }
            out += nl;
            out += close_pad;
            out += '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            out += nl;
            bool first = true;
            for (const auto& item : v) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                dump_value(item, indent, depth + 1, out);
            }
            out += nl;
            out += close_pad;
            out += ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.16e", d);
            out += buf;
            return;
        }
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() +
                                 "': " + ec.message());
    }
}

std::string time_series_csv(const SimulationResult& r) {
    std::string out = "t_us,re_a_in,im_a_in,re_a,im_a,re_a_out,im_a_out,omega_mhz\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        append_row(out, {r.times[k] * 1e6, r.a_in[k].real(), r.a_in[k].imag(), r.a[k].real(),
                         r.a[k].imag(), r.a_out[k].real(), r.a_out[k].imag(),
                         r.omega[k] / kTwoPi * 1e-6});
    }
    return out;
}

std::string shell_snapshot_csv(const SimulationResult& r) {
    if (r.S_final_write.size() != r.grid.size())
        throw std::invalid_argument("shell_snapshot_csv: result carries no per-shell snapshot");
    std::string out = "r_um,n_j,re_S,im_S,s_density\n";
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
        const double nj = r.grid.populations[j];
        const cplx s = r.S_final_write[j];
        append_row(out, {r.grid.radii[j] * 1e6, nj, s.real(), s.imag(), nj > 0.0 ? std::norm(s) / nj : 0.0});
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "mode,config,L_mm,R_um,n_shells,N_eff,C,A_opt,eta_w,eta_r,eta_tot,status\n";
    for (const auto& row : rows) {
        out += to_string(row.mode);
        out += ',';
        out += to_string(row.config);
        out += ',';
        out += num(row.L_mm) + ',' + num(row.R_um) + ',' + std::to_string(row.n_shells) + ',';
        append_row(out, {row.n_eff, row.cooperativity, row.a_opt, row.eta_w, row.eta_r, row.eta_tot});
        out.pop_back();
        std::string status = row.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out += ',' + status + '\n';
    }
    return out;
}

DensityProfile make_density_profile(const SimulationResult& extended, const SimulationResult& finite,
                                    const ModeProfile& probe) {
    if (extended.grid.radii != finite.grid.radii)
        throw std::invalid_argument("make_density_profile: runs use different shell grids");
    const auto ext = radial_excitation_density(extended.S_final_write, extended.grid);
    const auto fin = radial_excitation_density(finite.S_final_write, finite.grid);
    DensityProfile p;
    std::vector<double> se, sf, ref;
    for (std::size_t k = 0; k < ext.size(); ++k) {
        p.r.push_back(ext[k].r);
        se.push_back(ext[k].density);
        sf.push_back(fin[k].density);
        const double psi = mode_amplitude(probe, ext[k].r);
        ref.push_back(psi * psi);
    }
    p.s_extended = unit_peak(std::move(se));
    p.s_finite = unit_peak(std::move(sf));
    p.probe_reference = unit_peak(std::move(ref));
    return p;
}

std::string density_csv(const DensityProfile& p) {
    std::string out = "r_um,s_extended,s_finite,probe_reference\n";
    for (std::size_t k = 0; k < p.r.size(); ++k)
        append_row(out, {p.r[k] * 1e6, p.s_extended[k], p.s_finite[k], p.probe_reference[k]});
    return out;
}

nlohmann::ordered_json result_json(const SimulationResult& r) {
    nlohmann::ordered_json j;
    j["eta_w"] = r.eta_w;
    j["eta_r"] = r.eta_r;
    j["eta_tot"] = r.eta_tot;
    j["n_eff"] = r.n_eff;
    j["cooperativity"] = r.cooperativity;
    j["analytic_bound"] = analytic_optimal_efficiency(r.cooperativity);
    j["n_shells"] = r.grid.size();
    j["input_photons"] = r.input_photons;
    j["output_photons"] = r.output_photons;
    j["stored_write"] = r.stored_write;
    j["stored_read"] = r.stored_read;
    const auto& d = r.diagnostics;
    j["norm_residual"] = d.norm_residual;
    j["adiabaticity"] = d.adiabaticity;
    j["kernel"] = d.kernel;
    j["steps_accepted"] = d.stats.accepted;
    j["steps_rejected"] = d.stats.rejected;
    j["rhs_evals"] = d.stats.rhs_evals;
    j["error_estimate"] = d.stats.error_estimate;
    j["warnings"] = d.warnings;
    return j;
}

nlohmann::ordered_json sweep_row_json(const SweepRow& row) {
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(row.mode));
    j["config"] = std::string(to_string(row.config));
    j["L_mm"] = row.L_mm;
    j["R_um"] = row.R_um;
    j["n_shells"] = row.n_shells;
    j["n_eff"] = row.n_eff;
    j["cooperativity"] = row.cooperativity;
    j["a_opt"] = row.a_opt;
    j["eta_w"] = row.eta_w;
    j["eta_r"] = row.eta_r;
    j["eta_tot"] = row.eta_tot;
    j["status"] = row.status;
    return j;
}

std::string dump_exact(const nlohmann::ordered_json& doc, int indent) {
    std::string out;
    dump_value(doc, indent, 0, out);
    out += '\n';
    return out;
}

}  // namespace eitmem

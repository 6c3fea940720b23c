#pragma once

// CSV tables and JSON summary records. Files are written to a temporary
// sibling and renamed into place.

#include "eitmem/dynamics.hpp"
#include "eitmem/experiments.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace eitmem {

void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// t_us,re_a_in,im_a_in,re_a,im_a,re_a_out,im_a_out,omega_mhz (Omega/2pi).
std::string time_series_csv(const SimulationResult& result);

/// r_um,n_j,re_S,im_S,s_density with S_j taken at the end of the write window.
std::string shell_snapshot_csv(const SimulationResult& result);

/// mode,config,L_mm,R_um,n_shells,N_eff,C,A_opt,eta_w,eta_r,eta_tot,status
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Radial excitation density for the extended and finite-waist control
/// configurations on the same grid, each normalized to unit peak, plus the
/// probe intensity reference Psi_p(r)^2.
struct DensityProfile {
    std::vector<double> r;
    std::vector<double> s_extended;
    std::vector<double> s_finite;
    std::vector<double> probe_reference;
};

DensityProfile make_density_profile(const SimulationResult& extended, const SimulationResult& finite,
                                    const ModeProfile& probe);

/// r_um,s_extended,s_finite,probe_reference
std::string density_csv(const DensityProfile& profile);

/// Efficiencies and diagnostics of one run as a JSON object.
nlohmann::ordered_json result_json(const SimulationResult& result);

nlohmann::ordered_json sweep_row_json(const SweepRow& row);

/// Serializes with every floating-point number as %.16e so values reload
/// bit-exactly; non-finite numbers become null.
std::string dump_exact(const nlohmann::ordered_json& doc, int indent = 2);

}  // namespace eitmem

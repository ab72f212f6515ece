#pragma once

#include <span>
#include <string>

#include "toroflow/config.hpp"

namespace toroflow {

/// Write the psi_c level set as a structured-grid CSV mesh with rows
/// `theta,zeta,x,y,z` (17 significant digits), row-major in (i, j), with
/// closure rows duplicated at theta = 2pi and zeta = 2pi.  ntheta / nzeta
/// of 0 fall back to the config grid.
int cmd_surface(const RunConfig& cfg, double psi_c, int ntheta, int nzeta,
                const std::string& out_path);

/// For each eps, write the exact velocity against the first-order model on
/// the psi_c level of the sin^2-perturbed family: columns
/// `x,y,z,ux,uy,uz,u1x,u1y,u1z,psi,psi1`, one file per eps
/// (<out_base>_eps<val>.csv), plus a per-eps tangency summary on stdout.
int cmd_field(const RunConfig& cfg, double psi_c,
              std::span<const double> eps_list, const std::string& out_base,
              int ntheta = 0, int nzeta = 0);

/// Run the full verification suite, write one JSON record per check to
/// out_path (line-delimited) plus a human summary on stdout.  Returns 0 when
/// every gating check passes, 1 otherwise; config and domain errors are
/// thrown (the CLI maps them to exit 2).
int cmd_verify(const RunConfig& cfg, const std::string& out_path);

}  // namespace toroflow

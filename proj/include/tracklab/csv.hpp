#pragma once

#include <filesystem>
#include <iosfwd>

#include "tracklab/scenario.hpp"
#include "tracklab/sweep.hpp"

namespace tracklab {

inline constexpr const char* kCsvHeader =
    "t,x,y,theta,x_r,y_r,theta_r,e_x,e_y,e_theta,v_r,w_r,v_c,w_c,v,w,"
    "e_c_norm,u_fb1,u_fb2,u_ff1,u_ff2,u1,u2,V_lyap,Vdot_lyap";

/// One header row plus one row per record, 9 significant digits, '\n'
/// line endings. Throws std::invalid_argument on an empty log; the path
/// overload throws std::runtime_error naming the destination on IO
/// failure.
void emit_csv(const SimLog& log, std::ostream& out);
void emit_csv(const SimLog& log, const std::filesystem::path& path);

/// Ranked sweep table in the same numeric format.
void emit_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace tracklab

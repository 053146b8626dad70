#pragma once

#include <string>
#include <vector>

#include "epr/analysis.hpp"
#include "epr/biphoton.hpp"
#include "epr/correlations.hpp"
#include "epr/format.hpp"
#include "epr/instrument.hpp"

namespace epr::io {

// Self-describing amplitude container. Text form:
//   epr-amplitude text
//   basis <position|momentum> n1 <n> spacing1 <d> n2 <n> spacing2 <d>
//   <re im> per line, row-major
// Binary form replaces the body with raw little-endian doubles.
void save_amplitude_text(const std::string& path, const BiphotonAmplitude& a);
void save_amplitude_binary(const std::string& path, const BiphotonAmplitude& a);
BiphotonAmplitude load_amplitude(const std::string& path);

// Interferograms as whitespace-separated text matrices with a one-line header:
//   # epr-frame plane=<image|fourier> n=<n> pitch_um=<d> delta_rad=<d> k1=<d> k2=<d>
// Full-precision text is the authoritative analysis input.
void save_frame_text(const std::string& path, const Interferogram& f);
Interferogram load_frame_text(const std::string& path);

// 16-bit binary portable graymap (P5, maxval 65535, big-endian), scaled to the
// frame maximum. Lossy; for viewing only.
void save_frame_pgm(const std::string& path, const Interferogram& f);

// Two-column (coordinate, value) text for plotting.
void save_profile(const std::string& path, const Grid1D& axis, const std::vector<double>& values,
                  const std::string& comment = "");
void save_distribution(const std::string& path, const Distribution1D& d,
                       const std::string& comment = "");

std::string format_condition_report(const ConditionReport& r);

// Stable-key structured text; keys: delta_x_cond_um, delta_p_cond_hbar_per_um,
// U_hbar, U_th_hbar, F_percent, D, fit_*, config_*.
std::string format_report(const EprReport& r);
void save_report(const std::string& path, const EprReport& r);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace epr::io

#pragma once

#include <filesystem>
#include <vector>

#include "superosc/io.hpp"
#include "superosc/signal.hpp"

namespace superosc::figures {

struct FigureOutput {
  std::vector<std::filesystem::path> files;
  io::json summary = io::json::object();
};

// Bandlimit pi/2 with amplitudes (-1)^n at t = n, n = -5..5.
signal::ConstraintSpec example_constraints();

// signal.csv, signal.json and fig1.svg (log |f| globally, linear zoom on [-4, 4]).
FigureOutput fig1(const std::filesystem::path& dir,
                  signal::Precision precision = signal::Precision::Machine);

// response.csv, fig2.svg: |S_pi(t)|^2 for the fig1 signal.
FigureOutput fig2(const std::filesystem::path& dir, double quad_tol = 1e-9,
                  signal::Precision precision = signal::Precision::Machine);

// spectrum.json, gaps.csv, fig3.svg for lambda = 1, N = 16.
FigureOutput fig3(const std::filesystem::path& dir);

}  // namespace superosc::figures

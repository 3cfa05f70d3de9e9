#pragma once

#include "qkernel/bounds.hpp"
#include "qkernel/calibrate.hpp"
#include "qkernel/datasets.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/learner.hpp"

#include <json.hpp>

#include <string>

namespace qkernel {

using Json = nlohmann::ordered_json;

// Non-finite reals are written as the strings "inf", "-inf" and "nan" so the
// documents stay valid JSON and round-trip exactly.
Json real_to_json(double v);
double real_from_json(const Json& j);

Json to_json(const NoiseModel& noise);
Json to_json(const KernelParams& params);
Json kernel_sidecar(const KernelMatrix& k);
Json to_json(const CalibrationReport& report);
Json to_json(const KernelModel& model);
Json to_json(const BoundReport& report);
Json to_json(const SaturationReport& report);
Json to_json(const HoeffdingReport& report);
Json to_json(const CheckReport& report);

// Writes `<path>` as CSV and `<path>.json` with provenance and parameters.
void save_kernel(const KernelMatrix& k, const std::string& path);

void write_json(const Json& doc, const std::string& path);
Json read_json(const std::string& path);

}  // namespace qkernel

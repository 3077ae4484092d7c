#ifndef TIMEBIN_CIRCUIT_FILE_HPP
#define TIMEBIN_CIRCUIT_FILE_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "timebin/circuits.hpp"
#include "timebin/core.hpp"

namespace timebin {

// Raised when a document does not match the schema; the message names the
// offending field.
struct CircuitFileError final : ValidationError {
  using ValidationError::ValidationError;
};

// On-disk gate description:
//   {
//     "scheme": "dualrail" | "polarization",
//     "settings": {"eta":..,"theta1":..,"theta2":..,"gamma":..}
//               | {"jones": [[re,im] x4 row-major], "gamma":..},
//     "imperfections": {stage label: {"loss_db":..,"extinction_db":..,
//                                     "phase_error":..}},   // optional
//     "window": int                                          // optional
//   }
// Unknown fields anywhere are rejected.
struct CircuitFile {
  GateSettings settings;
  int window = kDefaultWindow;
};

nlohmann::json to_json(const CircuitFile& file);
CircuitFile circuit_file_from_json(const nlohmann::json& doc);

CircuitFile load_circuit_file(const std::string& path);
void save_circuit_file(const CircuitFile& file, const std::string& path);

// Builds the gate the file describes.
CircuitSpec build_circuit(const CircuitFile& file);

// Interchange forms: complex numbers as [re, im], modes as "path:slot:pol".
nlohmann::json to_json(const PhotonState& s);
PhotonState state_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const QubitMatrix& m);
QubitMatrix qubit_matrix_from_json(const nlohmann::json& doc);

}  // namespace timebin

#endif

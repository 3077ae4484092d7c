#include "timebin/circuit_file.hpp"

#include <fstream>
#include <set>

namespace timebin {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      throw CircuitFileError("unknown field '" + key + "' in " + where);
    }
  }
}

double number_field(const json& obj, const std::string& key,
                    const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw CircuitFileError("missing numeric field '" + key + "' in " + where);
  }
  return it->get<double>();
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw CircuitFileError("expected [re, im] pair in " + where);
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

}  // namespace

json to_json(const CircuitFile& file) {
  const GateSettings& s = file.settings;
  json settings;
  if (s.scheme == Scheme::dualrail) {
    settings = {{"eta", s.eta},
                {"theta1", s.theta1},
                {"theta2", s.theta2},
                {"gamma", s.gamma}};
  } else {
    json jones = json::array();
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) jones.push_back(complex_to_json(s.jones(r, c)));
    }
    settings = {{"jones", jones}, {"gamma", s.gamma}};
  }
  json doc = {{"scheme", to_string(s.scheme)},
              {"settings", settings},
              {"window", file.window}};
  if (!s.imperfections.stage_overrides.empty()) {
    json imps = json::object();
    for (const auto& [label, o] : s.imperfections.stage_overrides) {
      json entry = json::object();
      if (o.loss_db) entry["loss_db"] = *o.loss_db;
      if (o.extinction_db) entry["extinction_db"] = *o.extinction_db;
      if (o.phase_error) entry["phase_error"] = *o.phase_error;
      imps[label] = entry;
    }
    doc["imperfections"] = imps;
  }
  return doc;
}

CircuitFile circuit_file_from_json(const json& doc) {
  if (!doc.is_object()) throw CircuitFileError("circuit file must be an object");
  reject_unknown_keys(doc, {"scheme", "settings", "imperfections", "window"},
                      "circuit file");

  CircuitFile file;
  const auto scheme_it = doc.find("scheme");
  if (scheme_it == doc.end() || !scheme_it->is_string()) {
    throw CircuitFileError("missing string field 'scheme'");
  }
  try {
    file.settings.scheme = scheme_from_string(scheme_it->get<std::string>());
  } catch (const InvalidInput& e) {
    throw CircuitFileError(e.what());
  }

  const auto settings_it = doc.find("settings");
  if (settings_it == doc.end() || !settings_it->is_object()) {
    throw CircuitFileError("missing object field 'settings'");
  }
  const json& settings = *settings_it;
  if (file.settings.scheme == Scheme::dualrail) {
    reject_unknown_keys(settings, {"eta", "theta1", "theta2", "gamma"},
                        "settings");
    file.settings.eta = number_field(settings, "eta", "settings");
    file.settings.theta1 = number_field(settings, "theta1", "settings");
    file.settings.theta2 = number_field(settings, "theta2", "settings");
    file.settings.gamma = number_field(settings, "gamma", "settings");
  } else {
    reject_unknown_keys(settings, {"jones", "gamma"}, "settings");
    const auto jones_it = settings.find("jones");
    if (jones_it == settings.end() || !jones_it->is_array() ||
        jones_it->size() != 4) {
      throw CircuitFileError("'jones' must be 4 [re, im] pairs, row-major");
    }
    for (int k = 0; k < 4; ++k) {
      file.settings.jones(k / 2, k % 2) =
          complex_from_json((*jones_it)[static_cast<std::size_t>(k)], "jones");
    }
    file.settings.gamma = number_field(settings, "gamma", "settings");
  }

  if (const auto it = doc.find("imperfections"); it != doc.end()) {
    if (!it->is_object()) {
      throw CircuitFileError("'imperfections' must map stage labels to objects");
    }
    for (const auto& [label, entry] : it->items()) {
      if (!entry.is_object()) {
        throw CircuitFileError("imperfections for '" + label +
                               "' must be an object");
      }
      reject_unknown_keys(entry, {"loss_db", "extinction_db", "phase_error"},
                          "imperfections of '" + label + "'");
      StageOverride o;
      if (entry.contains("loss_db")) {
        o.loss_db = number_field(entry, "loss_db", label);
      }
      if (entry.contains("extinction_db")) {
        o.extinction_db = number_field(entry, "extinction_db", label);
      }
      if (entry.contains("phase_error")) {
        o.phase_error = number_field(entry, "phase_error", label);
      }
      file.settings.imperfections.stage_overrides[label] = o;
    }
  }

  if (const auto it = doc.find("window"); it != doc.end()) {
    if (!it->is_number_integer()) {
      throw CircuitFileError("'window' must be an integer slot count");
    }
    file.window = it->get<int>();
    if (file.window < 1) throw CircuitFileError("'window' must be >= 1");
  }
  return file;
}

CircuitFile load_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitFileError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CircuitFileError("cannot parse '" + path + "': " + e.what());
  }
  return circuit_file_from_json(doc);
}

void save_circuit_file(const CircuitFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CircuitFileError("cannot write '" + path + "'");
  out << to_json(file).dump(2) << "\n";
}

CircuitSpec build_circuit(const CircuitFile& file) {
  return file.settings.scheme == Scheme::dualrail
             ? dualrail_gate(file.settings, file.window)
             : polarization_gate(file.settings, file.window);
}

json to_json(const PhotonState& s) {
  json amps = json::object();
  for (const auto& [mode, amp] : s.amplitudes()) {
    amps[to_string(mode)] = complex_to_json(amp);
  }
  return {{"amplitudes", amps}};
}

PhotonState state_from_json(const json& doc) {
  const auto it = doc.find("amplitudes");
  if (!doc.is_object() || it == doc.end() || !it->is_object()) {
    throw CircuitFileError("state document needs an 'amplitudes' object");
  }
  std::map<Mode, Complex> amps;
  for (const auto& [key, value] : it->items()) {
    amps[parse_mode(key)] = complex_from_json(value, "amplitude of " + key);
  }
  return PhotonState(std::move(amps));
}

json to_json(const QubitMatrix& m) {
  json entries = json::array();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) entries.push_back(complex_to_json(m.m(r, c)));
  }
  return {{"basis", to_string(m.tag)}, {"entries", entries}};
}

QubitMatrix qubit_matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("basis") || !doc.contains("entries")) {
    throw CircuitFileError("matrix document needs 'basis' and 'entries'");
  }
  QubitMatrix m;
  m.tag = basis_tag_from_string(doc["basis"].get<std::string>());
  const json& entries = doc["entries"];
  if (!entries.is_array() || entries.size() != 4) {
    throw CircuitFileError("'entries' must be 4 [re, im] pairs, row-major");
  }
  for (int k = 0; k < 4; ++k) {
    m.m(k / 2, k % 2) =
        complex_from_json(entries[static_cast<std::size_t>(k)], "entries");
  }
  return m;
}

}  // namespace timebin

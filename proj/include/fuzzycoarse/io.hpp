#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fuzzycoarse/characterizations.hpp"
#include "fuzzycoarse/coarse_maps.hpp"
#include "fuzzycoarse/coarse_structure.hpp"
#include "fuzzycoarse/covers.hpp"
#include "fuzzycoarse/embedding.hpp"
#include "fuzzycoarse/fuzzy_space.hpp"
#include "fuzzycoarse/property_a.hpp"

namespace fuzzycoarse::io {

using Json = nlohmann::ordered_json;

/// Malformed input; `where` is a JSON pointer into the offending document.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& doc);

/// Finite numbers as-is; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double v);
double to_number(const Json& v, const std::string& where);

/// {"r": 1 - level, "t": t, "level": level}. On input "level" wins over "r".
Json scale_to_json(Scale s);
Scale scale_from_json(const Json& j, const std::string& where);

// Spaces
Json space_to_json(const FuzzySpace& space);
FuzzySpace space_from_json(const Json& j);

// Entourages: {"pairs": [["x","y"], ...]}
Json entourage_to_json(const FuzzySpace& space, const Entourage& e);
Entourage entourage_from_json(const FuzzySpace& space, const Json& j);

// Covers: {"sets": [[...]], "claims": {"r", "t", "lebesgue": [r, t], "multiplicity"}}
Json cover_to_json(const FuzzySpace& space, const Cover& c);
Cover cover_from_json(const FuzzySpace& space, const Json& j);

/// Either "sets" with explicit (point, level) pairs or "heights". Prefix-only
/// families are written as heights.
struct WitnessFile {
  std::optional<ParamTuple> params;
  WitnessFamily witness;
};
Json witness_to_json(const FuzzySpace& space, const WitnessFamily& w, const std::optional<ParamTuple>& p);
WitnessFile witness_from_json(const FuzzySpace& space, const Json& j);

// Kernels and operators: {"labels", "matrix", "window"}; kernels may add "imag".
Json kernel_to_json(const FuzzySpace& space, const Kernel& k);
Kernel kernel_from_json(const FuzzySpace& space, const Json& j);
Json operator_to_json(const FuzzySpace& space, const PropagatedOperator& op);
PropagatedOperator operator_from_json(const FuzzySpace& space, const Json& j);

// Vector fields: {"labels", "vectors", "window"}
Json field_to_json(const FuzzySpace& space, const Field& f);
Field field_from_json(const FuzzySpace& space, const Json& j);

// Maps: {"from", "to", "map": {"x": "y"}}
Json map_to_json(const FuzzySpace& from, const FuzzySpace& to, const PointMap& f);
PointMap map_from_json(const FuzzySpace& from, const FuzzySpace& to, const Json& j);

// Certificates and reports
Json axiom_report_to_json(const FuzzySpace& space, const AxiomReport& r);
Json witness_certificate_to_json(const FuzzySpace& space, const WitnessCertificate& c);
Json thm37_to_json(const FuzzySpace& space, const Thm37Result& r);
Json step_to_json(const StepCertificate& c);
Json round_trip_to_json(const RoundTrip& rt);
Json asdim_report_to_json(const FuzzySpace& space, const AsdimReport& r);
Json adx_table_to_json(const AdxTable& t);
Json modulus_table_to_json(const ModulusTable& t);
Json coarse_map_report_to_json(const FuzzySpace& source, const CoarseMapReport& r);
Json sako_to_json(const FuzzySpace& space, const SakoCertificate& c);
Json coarse_asdim_to_json(const FuzzySpace& space, const CoarseAsdimReport& r);
Json embedding_report_to_json(const FuzzySpace& space, const EmbeddingVectors& e, const DistortionReport& d);

}  // namespace fuzzycoarse::io

#pragma once

#include <string>

#include <json.hpp>

#include "expsum/ensembles.hpp"
#include "expsum/monge_ampere.hpp"
#include "expsum/spectrum.hpp"

namespace expsum {

using Json = nlohmann::json;

/// Schema {"n": int, "terms": [{"freq": [[re,im],...],
///                              "poly": [{"exps": [int,...], "coeff": [re,im]}]}]}.
Json to_json(const QuasiPolynomial& f);
QuasiPolynomial quasi_polynomial_from_json(const Json& j);

/// A spectrum file uses the same schema; the frequency set is taken.
Json to_json(const Spectrum& k);
Spectrum spectrum_from_json(const Json& j);

/// {"n": .., "basis": [<qp>...], "gram": [[[re,im],...],...],
///  "spectrum": [[re,im],...] (optional declared spectrum)}
Json to_json(const HermitianBasisSpace& v);
HermitianBasisSpace space_from_json(const Json& j);

Json to_json(const PvolResult& r);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

QuasiPolynomial load_quasi_polynomial(const std::string& path);
Spectrum load_spectrum(const std::string& path);
HermitianBasisSpace load_space(const std::string& path);

}  // namespace expsum

#include "expsum/serialize.hpp"

#include <fstream>

namespace expsum {

namespace {

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("expected [re, im] pair in JSON");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json to_json(const QuasiPolynomial& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms()) {
        Json freq = Json::array();
        for (int i = 0; i < t.freq.size(); ++i) freq.push_back(complex_to_json(t.freq[i]));
        Json poly = Json::array();
        for (const auto& p : t.poly) {
            Json exps = Json::array();
            for (int i = 0; i < p.exponents.size(); ++i) exps.push_back(p.exponents[i]);
            poly.push_back({{"exps", exps}, {"coeff", complex_to_json(p.coeff)}});
        }
        terms.push_back({{"freq", freq}, {"poly", poly}});
    }
    return {{"n", f.dimension()}, {"terms", terms}};
}

QuasiPolynomial quasi_polynomial_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    std::vector<QpTerm> terms;
    for (const auto& jt : j.at("terms")) {
        QpTerm term;
        const auto& jf = jt.at("freq");
        term.freq.resize(static_cast<long>(jf.size()));
        for (std::size_t i = 0; i < jf.size(); ++i)
            term.freq[static_cast<long>(i)] = complex_from_json(jf[i]);
        for (const auto& jp : jt.at("poly")) {
            PolyTerm p;
            const auto& je = jp.at("exps");
            p.exponents.resize(static_cast<long>(je.size()));
            for (std::size_t i = 0; i < je.size(); ++i)
                p.exponents[static_cast<long>(i)] = je[i].get<int>();
            p.coeff = complex_from_json(jp.at("coeff"));
            term.poly.push_back(std::move(p));
        }
        terms.push_back(std::move(term));
    }
    return QuasiPolynomial(n, std::move(terms));
}

Json to_json(const Spectrum& k) {
    return to_json(
        QuasiPolynomial::exponential_sum(k, Eigen::VectorXcd::Ones(static_cast<long>(k.size()))));
}

Spectrum spectrum_from_json(const Json& j) {
    return quasi_polynomial_from_json(j).spectrum();
}

Json to_json(const HermitianBasisSpace& v) {
    Json basis = Json::array();
    for (const auto& b : v.basis()) basis.push_back(to_json(b));
    Json gram = Json::array();
    for (long i = 0; i < v.gram().rows(); ++i) {
        Json row = Json::array();
        for (long jx = 0; jx < v.gram().cols(); ++jx)
            row.push_back(complex_to_json(v.gram()(i, jx)));
        gram.push_back(row);
    }
    Json spec = Json::array();
    for (const auto& f : v.spectrum().frequencies()) {
        Json freq = Json::array();
        for (int i = 0; i < f.size(); ++i) freq.push_back(complex_to_json(f[i]));
        spec.push_back(freq);
    }
    return {{"n", v.ambient_dimension()}, {"basis", basis}, {"gram", gram}, {"spectrum", spec}};
}

HermitianBasisSpace space_from_json(const Json& j) {
    std::vector<QuasiPolynomial> basis;
    for (const auto& jb : j.at("basis")) basis.push_back(quasi_polynomial_from_json(jb));
    const long d = static_cast<long>(basis.size());
    CMatrix gram(d, d);
    const auto& jg = j.at("gram");
    if (static_cast<long>(jg.size()) != d)
        throw std::invalid_argument("space JSON: gram size mismatch");
    for (long i = 0; i < d; ++i)
        for (long k = 0; k < d; ++k)
            gram(i, k) = complex_from_json(jg[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    std::optional<Spectrum> declared;
    if (j.contains("spectrum") && !j["spectrum"].empty()) {
        std::vector<Frequency> freqs;
        for (const auto& jf : j["spectrum"]) {
            Frequency f(static_cast<long>(jf.size()));
            for (std::size_t i = 0; i < jf.size(); ++i)
                f[static_cast<long>(i)] = complex_from_json(jf[i]);
            freqs.push_back(std::move(f));
        }
        declared = Spectrum(std::move(freqs));
    }
    return HermitianBasisSpace(std::move(basis), std::move(gram), std::move(declared));
}

Json to_json(const PvolResult& r) {
    Json per_eps = Json::array();
    for (const auto& row : r.per_eps)
        per_eps.push_back({{"eps", row.eps}, {"value", row.value}, {"error", row.error}});
    return {{"value", r.value}, {"error", r.error}, {"flagged", r.flagged}, {"per_eps", per_eps}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

QuasiPolynomial load_quasi_polynomial(const std::string& path) {
    return quasi_polynomial_from_json(load_json_file(path));
}

Spectrum load_spectrum(const std::string& path) {
    return spectrum_from_json(load_json_file(path));
}

HermitianBasisSpace load_space(const std::string& path) {
    return space_from_json(load_json_file(path));
}

}  // namespace expsum

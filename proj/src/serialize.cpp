#include "painleve/serialize.hpp"

#include <sstream>
#include <stdexcept>

#include "painleve/csv.hpp"

namespace painleve::serialize {

namespace {

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += csv::format_double(v[i]);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
    }
    return out;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("key-value block: missing key '" + key + "'");
    return it->second;
}

}  // namespace

std::string to_key_value(const EquationParams& p) {
    return "n = " + std::to_string(p.n()) + "\neps = " + join(p.eps()) + "\n";
}

std::string to_key_value(const InitialAsymptotics& a) {
    return "alpha = " + join(a.alpha()) + "\nphi = " + join(a.phi()) + "\n";
}

std::string to_key_value(const TransitionConstants& t) {
    std::string out;
    out += "p1 = " + csv::format_double(t.p1) + "\n";
    out += "p2 = " + csv::format_double(t.p2) + "\n";
    out += "Phi1 = " + csv::format_double(t.Phi1) + "\n";
    out += "Phi2 = " + csv::format_double(t.Phi2) + "\n";
    return out;
}

std::string to_key_value(const FinalAsymptotics& f) {
    std::string out;
    out += "sigma = " + std::to_string(f.sigma) + "\n";
    out += "I1 = " + csv::format_double(f.I1) + "\n";
    out += "I2 = " + csv::format_double(f.I2) + "\n";
    out += "phi1 = " + csv::format_double(f.phi1) + "\n";
    out += "phi2 = " + csv::format_double(f.phi2) + "\n";
    if (f.sigma_ambiguous) out += "sigma_ambiguous = 1\n";
    return out;
}

std::string to_key_value(const AverageReport& r) {
    std::string out;
    out += std::string("method = ") +
           (r.method == AverageMethod::monte_carlo ? "monte_carlo" : "tensor_quadrature") + "\n";
    out += "n_samples = " + std::to_string(r.n_samples) + "\n";
    out += "n_singular = " + std::to_string(r.n_singular) + "\n";
    out += "mean_I1 = " + csv::format_double(r.mean_I1) + "\n";
    out += "std_err_I1 = " + csv::format_double(r.std_err_I1) + "\n";
    out += "mean_I2 = " + csv::format_double(r.mean_I2) + "\n";
    out += "std_err_I2 = " + csv::format_double(r.std_err_I2) + "\n";
    return out;
}

std::string to_key_value(const fit::FitReport& r) {
    std::string out = to_key_value(r.final);
    out += "rms_residual = " + csv::format_double(r.rms_residual) + "\n";
    out += "window_lo = " + csv::format_double(r.x_lo) + "\n";
    out += "window_hi = " + csv::format_double(r.x_hi) + "\n";
    out += std::string("corrected_regular = ") + (r.corrections.renormalized_regular ? "1" : "0") +
           "\n";
    out += std::string("corrected_phase = ") + (r.corrections.phase_shift ? "1" : "0") + "\n";
    return out;
}

EquationParams params_from_key_value(const std::map<std::string, std::string>& kv) {
    EquationParams p(split_doubles(need(kv, "eps")));
    if (kv.count("n") && std::stoi(kv.at("n")) != p.n())
        throw std::invalid_argument("key-value block: n does not match the offset list");
    return p;
}

InitialAsymptotics initial_from_key_value(const std::map<std::string, std::string>& kv) {
    return InitialAsymptotics(split_doubles(need(kv, "alpha")), split_doubles(need(kv, "phi")));
}

FinalAsymptotics final_from_key_value(const std::map<std::string, std::string>& kv) {
    FinalAsymptotics f;
    f.sigma = std::stoi(need(kv, "sigma")) >= 0 ? 1 : -1;
    f.I1 = std::stod(need(kv, "I1"));
    f.I2 = std::stod(need(kv, "I2"));
    f.phi1 = wrap_angle(std::stod(need(kv, "phi1")));
    f.phi2 = wrap_angle(std::stod(need(kv, "phi2")));
    if (kv.count("sigma_ambiguous")) f.sigma_ambiguous = kv.at("sigma_ambiguous") == "1";
    if (f.I1 < 0 || f.I2 < 0)
        throw std::invalid_argument("key-value block: actions must be nonnegative");
    return f;
}

}  // namespace painleve::serialize

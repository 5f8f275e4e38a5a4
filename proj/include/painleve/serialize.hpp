// Line-oriented key=value serialization of the domain types.
#ifndef PAINLEVE_SERIALIZE_HPP
#define PAINLEVE_SERIALIZE_HPP

#include <map>
#include <string>

#include "painleve/fit.hpp"
#include "painleve/model.hpp"

namespace painleve::serialize {

// Each block is `key = value` per line; vectors become comma-joined values.
std::string to_key_value(const EquationParams& p);
std::string to_key_value(const InitialAsymptotics& a);
std::string to_key_value(const TransitionConstants& t);
std::string to_key_value(const FinalAsymptotics& f);
std::string to_key_value(const AverageReport& r);
std::string to_key_value(const fit::FitReport& r);

EquationParams params_from_key_value(const std::map<std::string, std::string>& kv);
InitialAsymptotics initial_from_key_value(const std::map<std::string, std::string>& kv);
FinalAsymptotics final_from_key_value(const std::map<std::string, std::string>& kv);

}  // namespace painleve::serialize

#endif

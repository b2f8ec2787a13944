#include "bienayme/kernel/family_io.hpp"

#include <fstream>
#include <sstream>

#include "bienayme/errors.hpp"

namespace bienayme::kernel {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kConfig, path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) config_error(path + "." + key, "missing field");
  return *it;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  return v.get<double>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) config_error(path, "expected an array");
  return v;
}

std::vector<double> double_array(const json& v, const std::string& path) {
  std::vector<double> out;
  const auto& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(as_double(arr[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

OffspringLaw parse_law(const json& t, int num_types, const std::string& path) {
  const auto& kind_v = field(t, "kind", path);
  if (!kind_v.is_string()) config_error(path + ".kind", "expected a string");
  const std::string kind = kind_v.get<std::string>();
  try {
    if (kind == "explicit") {
      const auto& words = as_array(field(t, "words", path), path + ".words");
      std::vector<WordProb> support;
      for (std::size_t k = 0; k < words.size(); ++k) {
        const std::string wp = path + ".words[" + std::to_string(k) + "]";
        const auto& w = as_array(field(words[k], "w", wp), wp + ".w");
        Word word;
        for (std::size_t s = 0; s < w.size(); ++s) {
          const int symbol = as_int(w[s], wp + ".w[" + std::to_string(s) + "]");
          if (symbol < 1 || symbol > num_types)
            config_error(wp + ".w[" + std::to_string(s) + "]", "type symbol out of range");
          word.push_back(symbol - 1);
        }
        support.push_back({std::move(word), as_double(field(words[k], "p", wp), wp + ".p")});
      }
      return OffspringLaw(std::move(support));
    }
    if (kind == "poisson_product" || kind == "geometric_product") {
      const auto means = double_array(field(t, "means", path), path + ".means");
      if (static_cast<int>(means.size()) != num_types)
        config_error(path + ".means", "expected one mean per type");
      double tail = 1e-12;
      if (t.contains("tail_mass")) tail = as_double(t["tail_mass"], path + ".tail_mass");
      return kind == "poisson_product" ? poisson_product(means, tail) : geometric_product(means, tail);
    }
    if (kind == "binomial_product") {
      const auto& trials_v = as_array(field(t, "trials", path), path + ".trials");
      std::vector<int> trials;
      for (std::size_t i = 0; i < trials_v.size(); ++i)
        trials.push_back(as_int(trials_v[i], path + ".trials[" + std::to_string(i) + "]"));
      const auto probs = double_array(field(t, "probs", path), path + ".probs");
      if (static_cast<int>(trials.size()) != num_types || static_cast<int>(probs.size()) != num_types)
        config_error(path, "expected one (trials, prob) pair per type");
      return binomial_product(trials, probs);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    config_error(path, e.what());
  }
  config_error(path + ".kind", "unknown kind '" + kind + "'");
}

}  // namespace

OffspringFamily family_from_json(const json& doc) {
  const int K = as_int(field(doc, "K", "$"), "$.K");
  const int Kprime = doc.contains("Kprime") ? as_int(doc["Kprime"], "$.Kprime") : 0;
  if (K < 1) config_error("$.K", "must be positive");
  if (Kprime < 0) config_error("$.Kprime", "must be nonnegative");
  const int num_types = K + Kprime;
  const auto& types = as_array(field(doc, "types", "$"), "$.types");
  if (static_cast<int>(types.size()) != num_types)
    config_error("$.types", "expected K + Kprime entries");
  std::vector<OffspringLaw> laws;
  for (int i = 0; i < num_types; ++i)
    laws.push_back(parse_law(types[static_cast<std::size_t>(i)], num_types,
                             "$.types[" + std::to_string(i) + "]"));
  std::vector<int> lambda;
  if (doc.contains("lambda")) {
    const auto& l = as_array(doc["lambda"], "$.lambda");
    for (std::size_t i = 0; i < l.size(); ++i)
      lambda.push_back(as_int(l[i], "$.lambda[" + std::to_string(i) + "]"));
  } else {
    lambda.assign(static_cast<std::size_t>(num_types), 0);
    lambda[0] = 1;
  }
  try {
    return OffspringFamily(K, Kprime, std::move(laws), std::move(lambda));
  } catch (const Error& e) {
    config_error("$", e.what());
  }
}

OffspringFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open family file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path + ": " + e.what());
  }
  return family_from_json(doc);
}

json family_to_json(const OffspringFamily& family) {
  json doc;
  doc["K"] = family.K();
  doc["Kprime"] = family.Kprime();
  doc["lambda"] = family.lambda();
  json types = json::array();
  for (const auto& law : family.laws()) {
    json words = json::array();
    for (const auto& e : law.support()) {
      std::vector<int> w;
      for (int s : e.word) w.push_back(s + 1);
      words.push_back({{"w", w}, {"p", e.prob}});
    }
    types.push_back({{"kind", "explicit"}, {"words", words}});
  }
  doc["types"] = types;
  return doc;
}

void save_family(const OffspringFamily& family, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kConfig, "cannot write '" + path + "'");
  out << family_to_json(family).dump(2) << '\n';
}

}  // namespace bienayme::kernel

#include "txnembed/synthgen.hpp"

#include "txnembed/csv.hpp"
#include "txnembed/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace txnembed::synth {

void ArchetypeSpec::validate(int n_categories) const {
    const auto K = static_cast<size_t>(n_categories);
    if (activity_prob.size() != K || log_amount_mean.size() != K || log_amount_std.size() != K)
        throw std::invalid_argument("archetype '" + name + "' has wrong per-category vector size");
    for (double p : activity_prob)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("archetype '" + name + "' activity_prob outside [0,1]");
    for (double s : log_amount_std)
        if (s < 0.0) throw std::invalid_argument("archetype '" + name + "' negative log_amount_std");
    for (int k : income_categories)
        if (k < 0 || k >= n_categories)
            throw std::invalid_argument("archetype '" + name + "' income category out of range");
}

void GenConfig::validate() const {
    if (n_clients <= 0 || n_categories <= 0)
        throw std::invalid_argument("generator counts must be positive");
    if (sociodemo_correlation < 0.0 || sociodemo_correlation > 1.0)
        throw std::invalid_argument("sociodemo_correlation must be in [0,1]");
    for (int s : sociodemo_vocab_sizes)
        if (s <= 0) throw std::invalid_argument("sociodemo vocabulary sizes must be positive");
}

namespace {

std::string client_name(long i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "client%06ld", i + 1);
    return buf;
}

std::string sociodemo_code(size_t attribute, int value) {
    static constexpr std::array<const char*, 6> prefixes = {"A", "G", "I", "P", "C", "R"};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%02d", prefixes[attribute], value);
    return buf;
}

std::vector<std::string> default_category_labels(int n_categories) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n_categories));
    for (int k = 0; k < n_categories; ++k) labels.push_back("CAT" + std::to_string(k + 1));
    return labels;
}

}  // namespace

Generated generate(const GenConfig& config, const std::vector<ArchetypeSpec>& archetypes) {
    config.validate();
    if (archetypes.empty()) throw std::invalid_argument("archetype list must be non-empty");
    for (const auto& a : archetypes) a.validate(config.n_categories);

    const long n = config.n_clients;
    const int K = config.n_categories;
    const auto n_arch = static_cast<uint64_t>(archetypes.size());

    std::vector<std::string> ids;
    ids.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) ids.push_back(client_name(i));

    Generated out;
    out.transactions = TransactionTable(ids, default_category_labels(K));
    out.archetype_labels.resize(static_cast<size_t>(n));

    out.sociodemo.client_ids = ids;
    for (size_t a = 0; a < kSociodemoAttributes.size(); ++a) {
        out.sociodemo.values[a].resize(static_cast<size_t>(n));
        out.sociodemo.vocab[a].reserve(static_cast<size_t>(config.sociodemo_vocab_sizes[a]));
        for (int v = 0; v < config.sociodemo_vocab_sizes[a]; ++v)
            out.sociodemo.vocab[a].push_back(sociodemo_code(a, v));
    }

    const uint64_t base = rng::derive(config.seed, "synthgen");
    for (long i = 0; i < n; ++i) {
        rng::Engine eng(rng::derive_stream(base, static_cast<uint64_t>(i)));
        const auto arch_idx = static_cast<size_t>(eng.uniform_below(n_arch));
        const ArchetypeSpec& arch = archetypes[arch_idx];
        out.archetype_labels[static_cast<size_t>(i)] = static_cast<int>(arch_idx);

        std::vector<uint8_t> income(static_cast<size_t>(K), 0);
        for (int k : arch.income_categories) income[static_cast<size_t>(k)] = 1;

        for (int k = 0; k < K; ++k) {
            const bool active = eng.uniform01() < arch.activity_prob[static_cast<size_t>(k)];
            // Draw the amount unconditionally so downstream cells keep the
            // same noise stream whether or not this cell is active.
            const double z = eng.normal();
            if (!active) continue;
            double amount = std::exp(arch.log_amount_mean[static_cast<size_t>(k)] +
                                     z * arch.log_amount_std[static_cast<size_t>(k)]);
            if (!income[static_cast<size_t>(k)]) amount = -amount;
            out.transactions.set(i, k, amount);
        }

        for (size_t a = 0; a < kSociodemoAttributes.size(); ++a) {
            const auto vocab_size = static_cast<uint64_t>(config.sociodemo_vocab_sizes[a]);
            const bool tied = eng.uniform01() < config.sociodemo_correlation;
            const uint64_t v =
                tied ? arch_idx % vocab_size : eng.uniform_below(vocab_size);
            out.sociodemo.values[a][static_cast<size_t>(i)] =
                sociodemo_code(a, static_cast<int>(v));
        }
    }
    return out;
}

std::vector<ArchetypeSpec> make_random_archetypes(int n_categories,
                                                  const RandomArchetypeOptions& opts,
                                                  uint64_t seed) {
    if (opts.n_archetypes <= 0) throw std::invalid_argument("n_archetypes must be positive");
    if (opts.core_size > n_categories)
        throw std::invalid_argument("core_size larger than category count");
    rng::Engine eng(rng::derive(seed, "archetypes"));
    std::vector<ArchetypeSpec> out;
    out.reserve(static_cast<size_t>(opts.n_archetypes));
    for (int a = 0; a < opts.n_archetypes; ++a) {
        ArchetypeSpec spec;
        spec.name = "archetype" + std::to_string(a);
        spec.activity_prob.assign(static_cast<size_t>(n_categories), opts.background_activity);
        spec.log_amount_mean.resize(static_cast<size_t>(n_categories));
        spec.log_amount_std.resize(static_cast<size_t>(n_categories));
        for (int k = 0; k < n_categories; ++k) {
            spec.log_amount_mean[static_cast<size_t>(k)] =
                opts.log_mean_center + (eng.uniform01() * 2.0 - 1.0) * opts.log_mean_spread;
            spec.log_amount_std[static_cast<size_t>(k)] =
                opts.log_std_lo + eng.uniform01() * (opts.log_std_hi - opts.log_std_lo);
        }
        // Core categories: a random subset with high activity.
        std::vector<int> order(static_cast<size_t>(n_categories));
        for (int k = 0; k < n_categories; ++k) order[static_cast<size_t>(k)] = k;
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<size_t>(eng.uniform_below(i))]);
        for (int c = 0; c < opts.core_size; ++c) {
            const auto k = static_cast<size_t>(order[static_cast<size_t>(c)]);
            spec.activity_prob[k] =
                opts.core_activity_lo +
                eng.uniform01() * (opts.core_activity_hi - opts.core_activity_lo);
        }
        for (int c = 0; c < opts.income_categories_per_archetype && c < n_categories; ++c)
            spec.income_categories.push_back(order[static_cast<size_t>(c)]);
        out.push_back(std::move(spec));
    }
    return out;
}

namespace {

struct NamedActivity {
    const char* label;
    double prob;
};

ArchetypeSpec named_archetype(const std::string& name,
                              const std::vector<std::string>& labels,
                              const std::vector<NamedActivity>& actives,
                              const std::vector<const char*>& income,
                              double background, double filler_wave) {
    const int K = static_cast<int>(labels.size());
    ArchetypeSpec spec;
    spec.name = name;
    spec.activity_prob.assign(static_cast<size_t>(K), background);
    spec.log_amount_mean.assign(static_cast<size_t>(K), 3.7);
    spec.log_amount_std.assign(static_cast<size_t>(K), 0.4);
    // Give filler categories a mild archetype-specific ripple so they are not
    // pure noise.
    for (int k = 0; k < K; ++k)
        if (labels[static_cast<size_t>(k)].rfind("CAT", 0) == 0 ||
            labels[static_cast<size_t>(k)].rfind("MOV_", 0) == 0)
            if ((k + static_cast<int>(filler_wave * 10)) % 5 == 0)
                spec.activity_prob[static_cast<size_t>(k)] = background + 0.18;
    auto index_of = [&labels](const char* l) {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) throw std::logic_error(std::string("preset label missing: ") + l);
        return static_cast<int>(it - labels.begin());
    };
    for (const auto& na : actives)
        spec.activity_prob[static_cast<size_t>(index_of(na.label))] = na.prob;
    for (const char* l : income) spec.income_categories.push_back(index_of(l));
    // Income categories carry larger amounts (salaries vs expenses).
    for (int k : spec.income_categories) {
        spec.log_amount_mean[static_cast<size_t>(k)] = 7.2;
        spec.log_amount_std[static_cast<size_t>(k)] = 0.25;
    }
    return spec;
}

std::vector<std::string> padded_labels(std::vector<std::string> named, int total,
                                       const char* pad_prefix) {
    if (total < static_cast<int>(named.size()))
        throw std::invalid_argument("category count smaller than the preset's named set");
    for (int k = static_cast<int>(named.size()); k < total; ++k)
        named.push_back(pad_prefix + std::to_string(k + 1));
    return named;
}

}  // namespace

std::vector<ArchetypeSpec> travel_preset(int n_categories,
                                         std::vector<std::string>* category_labels) {
    auto labels = padded_labels(
        {"SALARY", "HOTELS", "TRAVEL", "RESTAURANTS", "GROCERIES", "UTILITIES", "TRANSPORT",
         "CLOTHING", "SPORTS", "CULTURE", "PHARMACY", "EDUCATION", "PETROL", "ONLINE_SHOPPING",
         "PHONE_INTERNET", "BANK_FEES", "LEISURE", "PETS"},
        n_categories, "CAT");

    std::vector<ArchetypeSpec> out;
    out.push_back(named_archetype("frequent_traveler", labels,
                                  {{"TRAVEL", 0.95}, {"HOTELS", 0.85}, {"RESTAURANTS", 0.75},
                                   {"TRANSPORT", 0.6}, {"SALARY", 0.95}, {"LEISURE", 0.5}},
                                  {"SALARY"}, 0.05, 0.1));
    out.push_back(named_archetype("city_professional", labels,
                                  {{"TRAVEL", 0.45}, {"HOTELS", 0.5}, {"RESTAURANTS", 0.85},
                                   {"CULTURE", 0.6}, {"SALARY", 0.95}, {"PHONE_INTERNET", 0.8}},
                                  {"SALARY"}, 0.07, 0.3));
    out.push_back(named_archetype("homebody_family", labels,
                                  {{"TRAVEL", 0.04}, {"HOTELS", 0.03}, {"GROCERIES", 0.95},
                                   {"UTILITIES", 0.9}, {"PHARMACY", 0.5}, {"PETS", 0.4},
                                   {"SALARY", 0.9}},
                                  {"SALARY"}, 0.06, 0.5));
    out.push_back(named_archetype("student", labels,
                                  {{"TRAVEL", 0.12}, {"HOTELS", 0.05}, {"RESTAURANTS", 0.55},
                                   {"ONLINE_SHOPPING", 0.65}, {"EDUCATION", 0.8},
                                   {"SALARY", 0.3}},
                                  {"SALARY"}, 0.05, 0.7));
    out.push_back(named_archetype("retiree", labels,
                                  {{"TRAVEL", 0.3}, {"HOTELS", 0.35}, {"PHARMACY", 0.8},
                                   {"GROCERIES", 0.9}, {"CULTURE", 0.3}, {"SALARY", 0.85}},
                                  {"SALARY"}, 0.05, 0.9));
    if (category_labels) *category_labels = std::move(labels);
    return out;
}

std::vector<ArchetypeSpec> targeting_preset(int n_descriptors,
                                            std::vector<std::string>* descriptor_labels) {
    auto labels = padded_labels(
        {"INS_CAR_A", "INS_CAR_B", "TOLL", "PETROL", "REPAIR", "SALARY", "GROCERIES",
         "RESTAURANTS", "RENT", "UTILITIES", "PHONE_INTERNET", "ONLINE_SHOPPING", "TRANSPORT",
         "PHARMACY", "LEISURE"},
        n_descriptors, "MOV_");

    const std::vector<NamedActivity> car_block = {
        {"TOLL", 0.75}, {"PETROL", 0.9}, {"REPAIR", 0.5}};
    const std::vector<NamedActivity> everyday = {
        {"SALARY", 0.95}, {"GROCERIES", 0.9}, {"RESTAURANTS", 0.6}, {"UTILITIES", 0.85}};

    auto with_car = [&](const std::string& name, double ins_a, double ins_b, double wave) {
        std::vector<NamedActivity> act = car_block;
        act.insert(act.end(), everyday.begin(), everyday.end());
        act.push_back({"INS_CAR_A", ins_a});
        act.push_back({"INS_CAR_B", ins_b});
        return named_archetype(name, labels, act, {"SALARY"}, 0.03, wave);
    };
    auto without_car = [&](const std::string& name, double wave,
                           std::vector<NamedActivity> extra) {
        std::vector<NamedActivity> act = everyday;
        act.insert(act.end(), extra.begin(), extra.end());
        act.push_back({"TOLL", 0.01});
        act.push_back({"PETROL", 0.02});
        act.push_back({"REPAIR", 0.005});
        act.push_back({"INS_CAR_A", 0.0});
        act.push_back({"INS_CAR_B", 0.0});
        return named_archetype(name, labels, act, {"SALARY"}, 0.03, wave);
    };

    std::vector<ArchetypeSpec> out;
    out.push_back(with_car("owner_insured_a", 0.95, 0.0, 0.1));
    out.push_back(with_car("owner_insured_b1", 0.0, 0.95, 0.2));
    out.push_back(with_car("owner_insured_b2", 0.0, 0.95, 0.3));
    out.push_back(with_car("owner_uninsured", 0.0, 0.0, 0.4));
    out.push_back(without_car("urbanite_transit", 0.5, {{"TRANSPORT", 0.9}, {"LEISURE", 0.5}}));
    out.push_back(without_car("urbanite_online", 0.6,
                              {{"ONLINE_SHOPPING", 0.85}, {"PHONE_INTERNET", 0.9}}));
    out.push_back(without_car("renter_frugal", 0.7, {{"RENT", 0.95}, {"PHARMACY", 0.4}}));
    out.push_back(without_car("renter_social", 0.8, {{"RENT", 0.95}, {"RESTAURANTS", 0.9}}));
    out.push_back(without_car("suburban_transit", 0.9, {{"TRANSPORT", 0.7}, {"PETS", 0.0}}));
    out.push_back(without_car("homebody", 1.0, {{"UTILITIES", 0.95}, {"PHARMACY", 0.5}}));

    if (descriptor_labels) *descriptor_labels = std::move(labels);
    return out;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += csv::format_double(v[i]);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s, const std::string& context) {
    std::vector<double> out;
    for (const auto& f : csv::split_line(s)) {
        try {
            out.push_back(csv::parse_double(f, 0, 0));
        } catch (const csv::ParseError&) {
            throw std::runtime_error("bad number '" + f + "' in " + context);
        }
    }
    return out;
}

}  // namespace

void save_archetypes(const std::string& path, const std::vector<ArchetypeSpec>& archetypes,
                     const std::vector<std::string>& category_labels) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "# txnembed archetype set\n";
    out << "version = 1\n";
    out << "categories = ";
    for (size_t k = 0; k < category_labels.size(); ++k) {
        if (k) out << ',';
        out << category_labels[k];
    }
    out << '\n';
    for (const auto& a : archetypes) {
        out << "\n[archetype]\n";
        out << "name = " << a.name << '\n';
        out << "activity = " << join_doubles(a.activity_prob) << '\n';
        out << "log_mean = " << join_doubles(a.log_amount_mean) << '\n';
        out << "log_std = " << join_doubles(a.log_amount_std) << '\n';
        out << "income_categories = ";
        for (size_t i = 0; i < a.income_categories.size(); ++i) {
            if (i) out << ',';
            out << category_labels[static_cast<size_t>(a.income_categories[i])];
        }
        out << '\n';
    }
}

std::vector<ArchetypeSpec> load_archetypes(const std::string& path,
                                           std::vector<std::string>* category_labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);

    std::vector<std::string> labels;
    std::vector<ArchetypeSpec> out;
    ArchetypeSpec* cur = nullptr;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "[archetype]") {
            out.emplace_back();
            cur = &out.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("archetype file line " + std::to_string(lineno) +
                                     ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string ctx = "archetype file line " + std::to_string(lineno);
        if (key == "version") {
            if (val != "1") throw std::runtime_error("unsupported archetype file version " + val);
        } else if (key == "categories") {
            labels = csv::split_line(val);
        } else if (cur == nullptr) {
            throw std::runtime_error(ctx + ": key '" + key + "' outside [archetype] section");
        } else if (key == "name") {
            cur->name = val;
        } else if (key == "activity") {
            cur->activity_prob = parse_doubles(val, ctx);
        } else if (key == "log_mean") {
            cur->log_amount_mean = parse_doubles(val, ctx);
        } else if (key == "log_std") {
            cur->log_amount_std = parse_doubles(val, ctx);
        } else if (key == "income_categories") {
            if (labels.empty())
                throw std::runtime_error(ctx + ": income_categories before categories line");
            if (!val.empty())
                for (const auto& l : csv::split_line(val)) {
                    auto it = std::find(labels.begin(), labels.end(), l);
                    if (it == labels.end())
                        throw std::runtime_error(ctx + ": unknown income category " + l);
                    cur->income_categories.push_back(static_cast<int>(it - labels.begin()));
                }
        } else {
            throw std::runtime_error(ctx + ": unknown key '" + key + "'");
        }
    }
    if (labels.empty()) throw std::runtime_error("archetype file missing categories line");
    for (const auto& a : out) a.validate(static_cast<int>(labels.size()));
    if (category_labels) *category_labels = std::move(labels);
    return out;
}

}  // namespace txnembed::synth

#pragma once

#include "txnembed/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace txnembed::synth {

/// Generative profile of one behavioral segment: per-category activity
/// probabilities and lognormal amount parameters. Categories listed in
/// income_categories produce positive amounts, all others negative.
struct ArchetypeSpec {
    std::string name;
    std::vector<double> activity_prob;    // one per category, in [0,1]
    std::vector<double> log_amount_mean;  // lognormal mu, per category
    std::vector<double> log_amount_std;   // lognormal sigma >= 0, per category
    std::vector<int> income_categories;   // indices with positive sign

    void validate(int n_categories) const;
};

struct GenConfig {
    long n_clients = 1000;
    int n_categories = 70;
    uint64_t seed = 1;
    /// In [0,1]: 0 makes every sociodemo attribute independent of the
    /// archetype; 1 makes each attribute a deterministic function of it.
    double sociodemo_correlation = 0.0;
    /// Sociodemo vocabulary sizes (age, gender, income, postcode, city,
    /// province). Kept moderate so categorical encodings stay small.
    std::array<int, 6> sociodemo_vocab_sizes = {6, 3, 5, 20, 12, 8};

    void validate() const;
};

struct Generated {
    TransactionTable transactions;
    SociodemoTable sociodemo;
    std::vector<int> archetype_labels;  // per client
};

/// Draws one archetype per client (uniformly), then per category an
/// activity coin and a signed lognormal amount. Amounts stand for yearly
/// averages. Per-client noise streams are derived from (seed, client index),
/// so generation is deterministic and order-independent.
Generated generate(const GenConfig& config, const std::vector<ArchetypeSpec>& archetypes);

/// Randomly structured archetypes: each has a core set of categories with
/// high activity and a weak background rate elsewhere. The shared correlation
/// structure inside a core is what representation learning can exploit.
struct RandomArchetypeOptions {
    int n_archetypes = 5;
    int core_size = 12;
    double core_activity_lo = 0.55;
    double core_activity_hi = 0.9;
    double background_activity = 0.04;
    double log_mean_center = 3.7;  // exp(3.7) ~ 40 currency units
    double log_mean_spread = 0.7;
    double log_std_lo = 0.25;
    double log_std_hi = 0.5;
    int income_categories_per_archetype = 2;
};

std::vector<ArchetypeSpec> make_random_archetypes(int n_categories,
                                                  const RandomArchetypeOptions& opts,
                                                  uint64_t seed);

/// The in-repo "hotels + travel" preset: travel-active archetypes are also
/// hotel-active, non-travelers rarely touch either. Uses named categories
/// (HOTELS, TRAVEL, ...) padded with generic ones up to n_categories.
std::vector<ArchetypeSpec> travel_preset(int n_categories,
                                         std::vector<std::string>* category_labels);

/// Movement-descriptor level preset for campaign-targeting runs: car-owner
/// archetypes share car-expense descriptors (TOLL, PETROL, REPAIR) and split
/// between two insurance descriptors (INS_CAR_A, INS_CAR_B) or none.
std::vector<ArchetypeSpec> targeting_preset(int n_descriptors,
                                            std::vector<std::string>* descriptor_labels);

/// Archetype sets ship as plain config files; these two round-trip them.
void save_archetypes(const std::string& path, const std::vector<ArchetypeSpec>& archetypes,
                     const std::vector<std::string>& category_labels);
std::vector<ArchetypeSpec> load_archetypes(const std::string& path,
                                           std::vector<std::string>* category_labels);

}  // namespace txnembed::synth

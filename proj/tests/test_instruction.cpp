#include <doctest.h>

#include <set>

#include "art/instruction.hpp"
#include "art/io.hpp"
#include "art/rng.hpp"
#include "helpers.hpp"

using namespace art;
using testutil::make_triplet;

TEST_CASE("categorize follows the vocabulary") {
  const auto vocab = testutil::fixture_vocab();
  CHECK(categorize("above", vocab) == RelationCategory::spatial);
  CHECK(categorize("wearing", vocab) == RelationCategory::possessive);
  CHECK(categorize("eating", vocab) == RelationCategory::semantic);
  CHECK_THROWS_AS(categorize("riding", vocab), std::out_of_range);
}

TEST_CASE("question template is byte-exact") {
  const auto boat = make_triplet("t1", "i", "boat", "floating on", "water");
  CHECK(render_question(boat, RelationCategory::semantic) ==
        "Is there a prominent semantic relation between boat (subject) and "
        "water (object) in the image?");
  const auto man = make_triplet("t2", "i", "man", "above", "horse");
  CHECK(render_question(man, RelationCategory::spatial) ==
        "Is there a prominent spatial relation between man (subject) and "
        "horse (object) in the image?");
  CHECK(render_question(man, RelationCategory::spatial) ==
        render_question(man, RelationCategory::spatial));
}

TEST_CASE("positive template uses the specific predicate") {
  CHECK(render_positive(make_triplet("t", "i", "girl", "has", "hair")) ==
        "Yes, girl has hair.");
  CHECK(render_positive(make_triplet("t", "i", "bag", "on", "table")) ==
        "Yes, bag on table.");
}

TEST_CASE("counter-negative map defaults") {
  const auto map = CounterNegativeMap::defaults();
  map.validate();
  CHECK(map.allowed.at(RelationCategory::spatial) ==
        std::vector<RelationCategory>{RelationCategory::possessive});
  CHECK(map.allowed.at(RelationCategory::possessive).size() == 2);
  CHECK(map.allowed.at(RelationCategory::semantic) ==
        std::vector<RelationCategory>{RelationCategory::possessive});

  CounterNegativeMap bad = map;
  bad.allowed[RelationCategory::spatial] = {RelationCategory::spatial};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("negative mining") {
  const auto map = CounterNegativeMap::defaults();
  GenerationConfig cfg;
  cfg.seed = 5;

  SUBCASE("spatial positives force a possessive negative") {
    const auto t = make_triplet("t1", "i", "man", "above", "horse");
    const auto negatives = mine_negatives(t, RelationCategory::spatial, map, cfg);
    REQUIRE(negatives.size() == 1);
    CHECK(negatives[0].first == RelationCategory::possessive);
    CHECK(negatives[0].second ==
          "No, there is no prominent possessive relation between man and horse.");
  }

  SUBCASE("possessive positives draw one of the two allowed categories") {
    const auto t = make_triplet("t2", "i", "person", "wearing", "hat");
    const auto negatives = mine_negatives(t, RelationCategory::possessive, map, cfg);
    REQUIRE(negatives.size() == 1);
    const bool spatial = negatives[0].first == RelationCategory::spatial;
    const bool semantic = negatives[0].first == RelationCategory::semantic;
    CHECK((spatial || semantic));
    const std::string expected =
        std::string("No, there is no prominent ") + to_string(negatives[0].first) +
        " relation between person and hat.";
    CHECK(negatives[0].second == expected);
  }

  SUBCASE("round-robin repeats a singleton set") {
    const auto t = make_triplet("t3", "i", "person", "watching", "tv");
    GenerationConfig two = cfg;
    two.negatives_per_sample = 2;
    const auto negatives = mine_negatives(t, RelationCategory::semantic, map, two);
    REQUIRE(negatives.size() == 2);
    CHECK(negatives[0].first == RelationCategory::possessive);
    CHECK(negatives[1].first == RelationCategory::possessive);
  }

  SUBCASE("none mode yields no negatives even when a count is set") {
    GenerationConfig none = cfg;
    none.mode = NegativeMode::none;
    none.negatives_per_sample = 2;
    const auto t = make_triplet("t4", "i", "a", "on", "b");
    CHECK(mine_negatives(t, RelationCategory::spatial, map, none).empty());
  }

  SUBCASE("random mode avoids the positive category") {
    art::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
      GenerationConfig random = cfg;
      random.mode = NegativeMode::random;
      random.seed = rng.next();
      const auto t = make_triplet("t" + std::to_string(i), "i", "a", "on", "b");
      for (const auto& [category, text] :
           mine_negatives(t, RelationCategory::spatial, map, random)) {
        CHECK(category != RelationCategory::spatial);
      }
    }
  }
}

TEST_CASE("counter negatives stay inside the exclusivity map") {
  const auto vocab = testutil::fixture_vocab();
  const auto map = CounterNegativeMap::defaults();
  art::Rng rng(77);
  const auto& predicates = vocab.predicates();
  for (int i = 0; i < 1000; ++i) {
    const auto& predicate = predicates[rng.below(predicates.size())];
    const auto t = make_triplet("t" + std::to_string(i), "i",
                                "s" + std::to_string(rng.below(50)), predicate,
                                "o" + std::to_string(rng.below(50)));
    GenerationConfig cfg;
    cfg.seed = rng.next();
    cfg.negatives_per_sample = 1 + static_cast<int>(rng.below(3));
    const auto category = categorize(predicate, vocab);
    for (const auto& [negative, text] : mine_negatives(t, category, map, cfg)) {
      CHECK(negative != category);
      const auto& allowed = map.allowed.at(category);
      CHECK(std::find(allowed.begin(), allowed.end(), negative) != allowed.end());
    }
  }
}

TEST_CASE("generation produces one instance per triplet") {
  const auto vocab = testutil::fixture_vocab();
  const auto map = CounterNegativeMap::defaults();
  const std::vector<RelationTriplet> triplets = {
      make_triplet("t1", "i1", "man", "above", "horse"),
      make_triplet("t2", "i1", "girl", "has", "hair"),
      make_triplet("t3", "i2", "person", "eating", "apple"),
  };
  GenerationConfig cfg;
  cfg.seed = 3;

  SUBCASE("counter mode fills one negative each") {
    const auto instances = generate(triplets, vocab, map, cfg);
    REQUIRE(instances.size() == 3);
    for (const auto& inst : instances) {
      CHECK(inst.negative_responses.size() == 1);
      CHECK(inst.negative_categories.size() == 1);
      CHECK(inst.instance_id == inst.triplet_id);
    }
    CHECK(instances[0].positive_category == RelationCategory::spatial);
    CHECK(instances[1].positive_response == "Yes, girl has hair.");
  }

  SUBCASE("none mode leaves negatives empty") {
    GenerationConfig none = cfg;
    none.mode = NegativeMode::none;
    for (const auto& inst : generate(triplets, vocab, map, none)) {
      CHECK(inst.negative_responses.empty());
      CHECK(inst.negative_categories.empty());
    }
  }

  SUBCASE("same seed serializes byte-identically") {
    testutil::TempDir tmp("gen");
    save_instances(tmp.file("a.jsonl"), generate(triplets, vocab, map, cfg));
    save_instances(tmp.file("b.jsonl"), generate(triplets, vocab, map, cfg));
    CHECK(testutil::slurp(tmp.file("a.jsonl")) == testutil::slurp(tmp.file("b.jsonl")));
  }
}

TEST_CASE("instance files reload with parsed context") {
  testutil::TempDir tmp("inst");
  const auto vocab = testutil::fixture_vocab();
  const std::vector<RelationTriplet> triplets = {
      make_triplet("t1", "i1", "coffee table", "under", "street sign"),
  };
  GenerationConfig cfg;
  const auto instances = generate(triplets, vocab, CounterNegativeMap::defaults(), cfg);
  save_instances(tmp.file("x.jsonl"), instances);
  const auto loaded = load_instances(tmp.file("x.jsonl"));
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].subject == "coffee table");
  CHECK(loaded[0].object == "street sign");
  CHECK(loaded[0].predicate == "under");
  CHECK(loaded[0].positive_category == RelationCategory::spatial);
}

TEST_CASE("template dissection") {
  CHECK(strip_response_core("Yes, girl has hair.") == "girl has hair");
  CHECK(strip_response_core("No, there is no prominent spatial relation between a and b.") ==
        "there is no prominent spatial relation between a and b");
  CHECK(strip_response_core("notebook on table") == "notebook on table");

  const auto entities = parse_question_entities(
      "Is there a prominent spatial relation between coffee table (subject) "
      "and street sign (object) in the image?");
  REQUIRE(entities.has_value());
  CHECK(entities->first == "coffee table");
  CHECK(entities->second == "street sign");
  CHECK(!parse_question_entities("What is in the image?").has_value());

  CHECK(extract_predicate_phrase("girl has hair", "girl", "hair") == "has");
  CHECK(extract_predicate_phrase("coffee table next to street sign",
                                 "coffee table", "street sign") == "next to");
  CHECK(!extract_predicate_phrase("girl hair", "girl", "hair").has_value());
  CHECK(!extract_predicate_phrase("boy has hair", "girl", "hair").has_value());
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "support/support.hpp"
#include "trisearch/core/similarity.hpp"

using namespace trisearch;
using test_support::Rng;

namespace {

EmbeddingVector vec(std::vector<float> v) {
    return EmbeddingVector(std::move(v), false);
}

} // namespace

TEST_SUITE("cosine") {
    TEST_CASE("identical unit vectors score 1") {
        CHECK(cosine_similarity(vec({1, 0}), vec({1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("orthogonal vectors score 0") {
        CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("hand-computed case (3,4) vs (4,3)") {
        CHECK(cosine_similarity(vec({3, 4}), vec({4, 3})) ==
              doctest::Approx(0.96).epsilon(1e-15));
    }

    TEST_CASE("dimension mismatch raises") {
        CHECK_THROWS_AS(cosine_similarity(vec({1, 0}), vec({1, 0, 0})), DimensionError);
    }

    TEST_CASE("zero vector raises") {
        CHECK_THROWS_AS(cosine_similarity(vec({0, 0}), vec({1, 0})), DegenerateVectorError);
        CHECK_THROWS_AS(cosine_similarity(vec({1, 0}), vec({0, 0})), DegenerateVectorError);
    }

    TEST_CASE("symmetry and scale invariance over random vectors") {
        Rng rng(42);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t dim = 2 + rng.index(30);
            const auto a = test_support::random_embedding(rng, dim);
            const auto b = test_support::random_embedding(rng, dim);
            const double ab = cosine_similarity(a, b);
            const double ba = cosine_similarity(b, a);
            CHECK(ab == ba);

            const double k = rng.uniform(0.1, 10.0);
            std::vector<float> scaled(a.values().begin(), a.values().end());
            for (auto& x : scaled)
                x = static_cast<float>(x * k);
            const double scaled_sim = cosine_similarity(vec(std::move(scaled)), b);
            CHECK(std::fabs(scaled_sim - ab) < 1e-6);
            CHECK(ab >= -1.0);
            CHECK(ab <= 1.0);
        }
    }

    TEST_CASE("agrees with the reference implementation") {
        Rng rng(7);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t dim = 2 + rng.index(20);
            const auto a = test_support::random_vector(rng, dim);
            const auto b = test_support::random_vector(rng, dim);
            const double expected = oracle::cosine(a, b);
            const double actual =
                cosine_similarity(EmbeddingVector(a, false), EmbeddingVector(b, false));
            CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_SUITE("schema_scores") {
    TEST_CASE("all four vectors identical gives ones") {
        const auto v = vec({0.5, 0.5, 0.1});
        const SchemaScores s = schema_scores(v, v, v, v);
        CHECK(s.qc == doctest::Approx(1.0));
        CHECK(s.qm == doctest::Approx(1.0));
        CHECK(s.cg == doctest::Approx(1.0));
    }

    TEST_CASE("orthogonal and identical mix") {
        // q=(1,0), c=(0,1), m=(1,0), g=(0,1): qc orthogonal, qm and cg identical
        const SchemaScores s = schema_scores(vec({1, 0}), vec({0, 1}), vec({1, 0}), vec({0, 1}));
        CHECK(s.qc == doctest::Approx(0.0));
        CHECK(s.qm == doctest::Approx(1.0));
        CHECK(s.cg == doctest::Approx(1.0));
    }

    TEST_CASE("random instances match per-pair recomputation") {
        Rng rng(99);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t dim = 3 + rng.index(10);
            const auto q = test_support::random_vector(rng, dim);
            const auto c = test_support::random_vector(rng, dim);
            const auto m = test_support::random_vector(rng, dim);
            const auto g = test_support::random_vector(rng, dim);
            const SchemaScores s = schema_scores(vec(q), vec(c), vec(m), vec(g));
            CHECK(s.qc == doctest::Approx(oracle::cosine(q, c)).epsilon(1e-12));
            CHECK(s.qm == doctest::Approx(oracle::cosine(q, m)).epsilon(1e-12));
            CHECK(s.cg == doctest::Approx(oracle::cosine(c, g)).epsilon(1e-12));
        }
    }

    TEST_CASE("errors carry the failing schema") {
        try {
            schema_scores(vec({1, 0}), vec({1, 0}), vec({1, 0, 0}), vec({1, 0}));
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            CHECK(std::string(e.what()).find("qm") != std::string::npos);
        }
    }
}

TEST_SUITE("fusion weights and linear fusion") {
    TEST_CASE("unit alpha reduces to the query-code score") {
        CHECK(fuse_linear({0.7, 0.2, 0.9}, FusionWeights(1, 0, 0)) == doctest::Approx(0.7));
    }

    TEST_CASE("convex combination of equal scores is the score") {
        CHECK(fuse_linear({1, 1, 1}, FusionWeights::defaults()) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("hand-computed weighted sum") {
        // 0.65*0.4 + 0.25*0.8 + 0.10*0.2
        CHECK(fuse_linear({0.4, 0.8, 0.2}, FusionWeights::defaults()) ==
              doctest::Approx(0.48).epsilon(1e-12));
    }

    TEST_CASE("defaults are (0.65, 0.25, 0.10)") {
        const auto w = FusionWeights::defaults();
        CHECK(w.alpha() == 0.65);
        CHECK(w.beta() == 0.25);
        CHECK(w.gamma() == 0.10);
        CHECK(w.origin() == WeightOrigin::defaults);
    }

    TEST_CASE("weights outside the simplex are rejected") {
        CHECK_THROWS_AS(FusionWeights(0.5, 0.5, 0.5), ParameterError);
        CHECK_THROWS_AS(FusionWeights(-0.1, 0.6, 0.5), ParameterError);
        CHECK_THROWS_AS(FusionWeights(1.2, -0.1, -0.1), ParameterError);
        CHECK_NOTHROW(FusionWeights(0.2, 0.3, 0.5));
    }
}

TEST_SUITE("rank_candidates") {
    TEST_CASE("two candidates rank by fused score") {
        const auto r = rank_candidates({{"a", {0.9, 0.9, 0.9}}, {"b", {0.1, 0.1, 0.1}}},
                                       FusionWeights::defaults(), "q");
        REQUIRE(r.entries.size() == 2);
        CHECK(r.entries[0].candidate_id == "a");
        CHECK(r.entries[0].rank == 1);
        CHECK(r.entries[1].candidate_id == "b");
        CHECK(r.entries[1].rank == 2);
        CHECK(r.query_id == "q");
    }

    TEST_CASE("ties break by candidate id ascending") {
        const auto r = rank_candidates({{"z", {0.5, 0.5, 0.5}}, {"a", {0.5, 0.5, 0.5}}},
                                       FusionWeights::defaults());
        CHECK(r.entries[0].candidate_id == "a");
        CHECK(r.entries[1].candidate_id == "z");
    }

    TEST_CASE("duplicate candidate ids are rejected") {
        CHECK_THROWS_AS(rank_candidates({{"a", {}}, {"a", {}}}, FusionWeights::defaults()),
                        DuplicateCandidateError);
    }

    TEST_CASE("matches the full-sort reference on random instances") {
        Rng rng(1234);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::pair<std::string, SchemaScores>> rows;
            std::vector<std::pair<std::string, oracle::Triple>> oracle_rows;
            const std::size_t n = 10;
            for (std::size_t i = 0; i < n; ++i) {
                SchemaScores s{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
                const std::string id = "cand" + std::to_string(i);
                rows.push_back({id, s});
                oracle_rows.push_back({id, {s.qc, s.qm, s.cg}});
            }
            const double a = rng.next_double();
            const double b = rng.next_double() * (1.0 - a);
            const double g = 1.0 - a - b;
            const FusionWeights w(a, b, std::max(0.0, g));

            const auto ranked = rank_candidates(rows, w);
            const auto expected = oracle::rank_by_weighted(oracle_rows, w.alpha(), w.beta(),
                                                           w.gamma());
            REQUIRE(ranked.entries.size() == expected.size());
            for (std::size_t i = 0; i < expected.size(); ++i) {
                CHECK(ranked.entries[i].candidate_id == expected[i]);
                CHECK(ranked.entries[i].rank == static_cast<int>(i) + 1);
            }
        }
    }

    TEST_CASE("input permutation does not change the output") {
        Rng rng(555);
        std::vector<std::pair<std::string, SchemaScores>> rows;
        for (std::size_t i = 0; i < 20; ++i)
            rows.push_back({"c" + std::to_string(i),
                            {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}});
        const auto baseline = rank_candidates(rows, FusionWeights::defaults());

        for (int trial = 0; trial < 10; ++trial) {
            // Fisher-Yates with the test rng
            auto shuffled = rows;
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
            const auto r = rank_candidates(shuffled, FusionWeights::defaults());
            REQUIRE(r.entries.size() == baseline.entries.size());
            for (std::size_t i = 0; i < r.entries.size(); ++i)
                CHECK(r.entries[i].candidate_id == baseline.entries[i].candidate_id);
        }
    }

    TEST_CASE("raising one schema score never lowers that candidate's rank") {
        Rng rng(777);
        const FusionWeights w(0.5, 0.3, 0.2);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::pair<std::string, SchemaScores>> rows;
            for (std::size_t i = 0; i < 12; ++i)
                rows.push_back({"c" + std::to_string(i),
                                {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}});
            const auto before = rank_candidates(rows, w);

            const std::size_t target = rng.index(rows.size());
            const std::string target_id = rows[target].first;
            const int which = static_cast<int>(rng.index(3));
            auto bumped = rows;
            double& field = which == 0   ? bumped[target].second.qc
                            : which == 1 ? bumped[target].second.qm
                                         : bumped[target].second.cg;
            field = std::min(1.0, field + rng.uniform(0.0, 0.5));
            const auto after = rank_candidates(bumped, w);

            auto rank_of = [&](const RankedResult& r) {
                for (const auto& e : r.entries) {
                    if (e.candidate_id == target_id)
                        return e.rank;
                }
                return -1;
            };
            CHECK(rank_of(after) <= rank_of(before));
        }
    }

    TEST_CASE("unit weights order exactly by the corresponding schema") {
        Rng rng(31);
        std::vector<std::pair<std::string, SchemaScores>> rows;
        for (std::size_t i = 0; i < 15; ++i)
            rows.push_back({"c" + std::to_string(i),
                            {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}});

        for (Schema schema : kAllSchemas) {
            const auto ranked = rank_candidates(rows, FusionWeights::unit(schema));
            auto sorted = rows;
            std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
                const double sa = a.second.get(schema);
                const double sb = b.second.get(schema);
                if (sa != sb)
                    return sa > sb;
                return a.first < b.first;
            });
            for (std::size_t i = 0; i < sorted.size(); ++i)
                CHECK(ranked.entries[i].candidate_id == sorted[i].first);
        }
    }
}

TEST_SUITE("embedding vector") {
    TEST_CASE("rejects empty and non-finite values") {
        CHECK_THROWS_AS(EmbeddingVector({}, false), ParameterError);
        CHECK_THROWS_AS(EmbeddingVector({1.0f, NAN}, false), ParameterError);
        CHECK_THROWS_AS(EmbeddingVector({INFINITY}, false), ParameterError);
    }

    TEST_CASE("normalized flag is checked") {
        CHECK_THROWS_AS(EmbeddingVector({3, 4}, true), ParameterError);
        CHECK_NOTHROW(EmbeddingVector({0.6f, 0.8f}, true));
    }
}

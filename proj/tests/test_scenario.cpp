#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "apeot/geometry.hpp"
#include "apeot/scenario.hpp"

using namespace apeot;

TEST_CASE("buildTrajectory: straight-line kinematics") {
    ScenarioConfig cfg;
    cfg.waypoints = {{1.0, 1.0}, {1.0, 5.0}};
    cfg.numSteps = 80;
    cfg.speed = 0.5;
    cfg.dt = 0.1;
    const GroundTruth truth = buildTrajectory(cfg);
    REQUIRE(truth.states.size() == 80);
    CHECK(truth.states[39].p.x() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(truth.states[39].p.y() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(truth.orientations[39] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("buildTrajectory: default scenario") {
    const ScenarioConfig cfg;
    const GroundTruth truth = buildTrajectory(cfg);
    REQUIRE(truth.states.size() == 190);
    REQUIRE(truth.orientations.size() == 190);

    for (const AgentState& s : truth.states) {
        CHECK(s.b.x() == 0.25);
        CHECK(s.b.y() == 0.1);
        CHECK(s.v.norm() == doctest::Approx(cfg.speed).epsilon(1e-12));
    }

    // consecutive positions consistent with the step velocity except at turns
    int inconsistent = 0;
    for (std::size_t n = 1; n < truth.states.size(); ++n) {
        const Vec2 delta = truth.states[n].p - truth.states[n - 1].p;
        const Vec2 expected = truth.states[n].v * cfg.dt;
        if ((delta - expected).norm() > 1e-9) ++inconsistent;
    }
    CHECK(inconsistent <= 2);  // the two direction changes

    // two distinct heading changes along the track
    int turns = 0;
    for (std::size_t n = 1; n < truth.orientations.size(); ++n)
        if (std::abs(truth.orientations[n] - truth.orientations[n - 1]) > 1e-9) ++turns;
    CHECK(turns == 2);
}

TEST_CASE("buildTrajectory: path underrun is an error") {
    ScenarioConfig cfg;
    cfg.waypoints = {{1.0, 1.0}, {1.0, 2.0}};  // 1 m of path
    cfg.numSteps = 190;                        // needs 9.5 m
    CHECK_THROWS_WITH_AS(buildTrajectory(cfg), "trajectory underruns step count",
                         std::runtime_error);
}

TEST_CASE("ScenarioConfig validation names the offending key") {
    ScenarioConfig cfg;
    cfg.gamma = -1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), "gamma: must be positive", std::runtime_error);

    ScenarioConfig small;
    small.dMax = 10.0;  // below the largest bistatic range
    CHECK_THROWS_AS(small.validate(), std::runtime_error);

    ScenarioConfig olos;
    olos.olosEnd = 400;
    CHECK_THROWS_AS(olos.validate(), std::runtime_error);

    CHECK_NOTHROW(ScenarioConfig{}.validate());
}

TEST_CASE("sampleScatterOnEllipse: degenerate and membership") {
    std::mt19937_64 rng(1);
    CHECK(sampleScatterOnEllipse(Mat2::Zero(), 0.5, rng).norm() == 0.0);

    const Mat2 x = ExtentModel::fromSemiAxes(0.3, 0.2).E;
    for (int i = 0; i < 2000; ++i) {
        const Vec2 q = sampleScatterOnEllipse(x, 0.5, rng);
        const double r = (q.x() / 0.3) * (q.x() / 0.3) + (q.y() / 0.2) * (q.y() / 0.2);
        CHECK(r <= 1.0 + 1e-12);
    }
}

TEST_CASE("sampleScatterOnEllipse: uniform-ellipse second moments") {
    std::mt19937_64 rng(2);
    const Mat2 x = ExtentModel::fromSemiAxes(0.3, 0.2).E;
    const int n = 100'000;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0, sx4 = 0.0, sy4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 q = sampleScatterOnEllipse(x, 0.5, rng);
        sx += q.x();
        sy += q.y();
        sxx += q.x() * q.x();
        syy += q.y() * q.y();
        sxy += q.x() * q.y();
        sx4 += std::pow(q.x(), 4);
        sy4 += std::pow(q.y(), 4);
    }
    const double varX = sxx / n;
    const double varY = syy / n;
    // second moment of a uniform solid ellipse is (semi-axis)^2 / 4
    const double seX = std::sqrt((sx4 / n - varX * varX) / n);
    const double seY = std::sqrt((sy4 / n - varY * varY) / n);
    CHECK(std::abs(varX - 0.3 * 0.3 / 4.0) < 3.0 * seX);
    CHECK(std::abs(varY - 0.2 * 0.2 / 4.0) < 3.0 * seY);
    CHECK(std::abs(sx / n) < 3.0 * std::sqrt(varX / n));
    CHECK(std::abs(sy / n) < 3.0 * std::sqrt(varY / n));
    CHECK(std::abs(sxy / n) < 3.0 * std::sqrt(varX * varY / n));
}

TEST_CASE("generateActive: LOS candidate and blockage") {
    ScenarioConfig cfg;
    cfg.muMeas = 0.0;
    cfg.muClutter = 0.0;
    cfg.enableDistanceNoise = false;
    const GroundTruth truth = buildTrajectory(cfg);
    MeasurementGenerator gen(cfg, 7);

    const AgentState& s = truth.states[10];
    const double theta = truth.orientations[10];

    auto open = gen.generateActive(s, theta, 0, false);
    REQUIRE(open.size() == 1);
    CHECK(open[0].d == doctest::Approx((s.p - cfg.anchors[0].position).norm()).epsilon(1e-15));
    CHECK(open[0].isActive());

    auto blocked = gen.generateActive(s, theta, 0, true);
    CHECK(blocked.empty());
}

TEST_CASE("generateActive: 40 dB at 1 m") {
    ScenarioConfig cfg;
    cfg.muMeas = 0.0;
    cfg.muClutter = 0.0;
    cfg.enableDistanceNoise = false;
    MeasurementGenerator gen(cfg, 7);

    AgentState s;
    s.p = {1.0, 0.0};  // 1 m from anchor 0
    auto out = gen.generateActive(s, 0.0, 0, false);
    REQUIRE(out.size() == 1);
    CHECK(out[0].u == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(gen.losAmplitude(1.0) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("generatePassive: empty when rates vanish, bistatic degeneracy") {
    ScenarioConfig cfg;
    cfg.muClutter = 0.0;
    cfg.enableDistanceNoise = false;

    {
        ScenarioConfig none = cfg;
        none.muMeas = 0.0;
        MeasurementGenerator gen(none, 3);
        CHECK(gen.generatePassive(buildTrajectory(none).states[0], 0.0, 3, 0).empty());
    }

    // body center on the tx-rx segment: object distances collapse to the
    // baseline up to the extent size
    cfg.muMeas = 40.0;
    MeasurementGenerator gen(cfg, 3);
    AgentState s;
    s.p = {3.0, 5.9};
    s.b = {0.0, 0.1};  // center (3, 6) between anchors 2 (0,6) and 3 (6,6)
    const double baseline = 6.0;
    auto out = gen.generatePassive(s, 0.0, 3, 2);
    CHECK(out.size() > 10);
    for (const Measurement& z : out) {
        CHECK(z.d >= baseline - 1e-12);
        CHECK(z.d <= baseline + 2.0 * 0.3 + 1e-9);
        CHECK(!z.isActive());
    }
}

TEST_CASE("generatePassive: amplitude calibration sits near the configured gap") {
    ScenarioConfig cfg;
    cfg.muClutter = 0.0;
    cfg.muMeas = 60.0;
    cfg.enableDistanceNoise = false;
    const GroundTruth truth = buildTrajectory(cfg);
    MeasurementGenerator gen(cfg, 11);

    const int mid = static_cast<int>(truth.states.size()) / 2;
    const AgentState& s = truth.states[mid];
    const double theta = truth.orientations[mid];

    std::vector<double> passiveDb;
    for (const Anchor& rx : cfg.anchors) {
        if (rx.id == cfg.passiveTxAnchorId) continue;
        for (const Measurement& z : gen.generatePassive(s, theta, cfg.passiveTxAnchorId, rx.id))
            passiveDb.push_back(20.0 * std::log10(z.u));
    }
    REQUIRE(passiveDb.size() > 50);
    std::sort(passiveDb.begin(), passiveDb.end());
    const double medianPassive = passiveDb[passiveDb.size() / 2];

    std::vector<double> losDb;
    for (const Anchor& a : cfg.anchors)
        losDb.push_back(20.0 * std::log10(gen.losAmplitude((s.p - a.position).norm())));
    std::sort(losDb.begin(), losDb.end());
    const double medianLos = 0.5 * (losDb[1] + losDb[2]);

    CHECK(medianLos - medianPassive == doctest::Approx(cfg.passiveGapDb).epsilon(0.2));
}

TEST_CASE("generateClutter: rates and support") {
    ScenarioConfig cfg;
    {
        ScenarioConfig none = cfg;
        none.muClutter = 0.0;
        MeasurementGenerator gen(none, 5);
        CHECK(gen.generateClutter(0, Measurement::kTxAgent).empty());
    }

    MeasurementGenerator gen(cfg, 5);
    const int draws = 20'000;
    double total = 0.0;
    double totalSq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto clutter = gen.generateClutter(0, Measurement::kTxAgent);
        total += clutter.size();
        totalSq += static_cast<double>(clutter.size()) * clutter.size();
        for (const Measurement& z : clutter) {
            CHECK(z.d >= 0.0);
            CHECK(z.d <= cfg.dMax);
            CHECK(z.u >= cfg.gamma);
        }
    }
    const double mean = total / draws;
    const double se = std::sqrt((totalSq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - cfg.muClutter) < 3.0 * se);
}

TEST_CASE("generateStep: structure, blockage window, determinism") {
    ScenarioConfig cfg;
    cfg.muMeas = 0.0;
    cfg.muClutter = 0.0;
    cfg.enableDistanceNoise = false;
    const GroundTruth truth = buildTrajectory(cfg);

    MeasurementGenerator gen(cfg, 21);
    const MeasurementSet olos = gen.generateStep(truth, 100);  // inside [80, 129]
    REQUIRE(olos.active.size() == 4);
    REQUIRE(olos.passive.size() == 4);
    for (const auto& ch : olos.active) CHECK(ch.empty());  // no LOS while blocked

    const MeasurementSet open = gen.generateStep(truth, 10);
    for (const auto& ch : open.active) CHECK(ch.size() == 1);
    CHECK(olos.timeIndex == 100);

    // excluded self-pair stays structurally present but empty
    ScenarioConfig withScatter = cfg;
    withScatter.muMeas = 5.0;
    MeasurementGenerator gen2(withScatter, 22);
    const MeasurementSet step = gen2.generateStep(truth, 10);
    CHECK(step.passive[withScatter.passiveTxAnchorId].empty());

    // determinism: same seed, same record
    MeasurementGenerator genA(withScatter, 77);
    MeasurementGenerator genB(withScatter, 77);
    const auto recA = genA.generateRecord(truth);
    const auto recB = genB.generateRecord(truth);
    REQUIRE(recA.size() == recB.size());
    for (std::size_t n = 0; n < recA.size(); ++n) {
        REQUIRE(recA[n].totalCount() == recB[n].totalCount());
        for (std::size_t j = 0; j < recA[n].active.size(); ++j) {
            REQUIRE(recA[n].active[j].size() == recB[n].active[j].size());
            for (std::size_t l = 0; l < recA[n].active[j].size(); ++l) {
                CHECK(recA[n].active[j][l].d == recB[n].active[j][l].d);
                CHECK(recA[n].active[j][l].u == recB[n].active[j][l].u);
            }
        }
    }
}

TEST_CASE("generated measurements satisfy the type invariants") {
    const ScenarioConfig cfg;  // defaults, noise and clutter on
    const GroundTruth truth = buildTrajectory(cfg);
    MeasurementGenerator gen(cfg, 31);
    const auto record = gen.generateRecord(truth);
    REQUIRE(record.size() == 190);
    for (const MeasurementSet& set : record) {
        for (const auto& ch : set.active)
            for (const Measurement& z : ch) {
                CHECK(z.d >= 0.0);
                CHECK(z.d <= cfg.dMax);
                CHECK(z.u >= cfg.gamma);
                CHECK(z.isActive());
            }
        for (const auto& ch : set.passive)
            for (const Measurement& z : ch) {
                CHECK(z.d >= 0.0);
                CHECK(z.d <= cfg.dMax);
                CHECK(z.u >= cfg.gamma);
                CHECK(z.txAnchor == cfg.passiveTxAnchorId);
            }
    }
    // default scene operates far from the threshold: nothing is rejected
    CHECK(gen.stats().rejectionRate() == 0.0);
}

TEST_CASE("object measurement count converges to mu_m minus rejections") {
    ScenarioConfig cfg;
    cfg.muClutter = 0.0;
    const GroundTruth truth = buildTrajectory(cfg);

    SUBCASE("no rejection at default threshold") {
        MeasurementGenerator gen(cfg, 41);
        const AgentState& s = truth.states[50];
        const int reps = 4000;
        double total = 0.0, totalSq = 0.0;
        for (int i = 0; i < reps; ++i) {
            const auto out = gen.generatePassive(s, truth.orientations[50], 3, 0);
            total += out.size();
            totalSq += static_cast<double>(out.size()) * out.size();
        }
        const double mean = total / reps;
        const double se = std::sqrt((totalSq / reps - mean * mean) / reps);
        CHECK(gen.stats().objectRejected == 0);
        CHECK(std::abs(mean - cfg.muMeas) < 3.0 * se);
    }

    SUBCASE("raised threshold rejects and the audit accounts for it") {
        ScenarioConfig strict = cfg;
        strict.gamma = 12.0;  // rejects a sizable fraction of passive scatters
        MeasurementGenerator gen(strict, 42);
        const AgentState& s = truth.states[50];
        const int reps = 4000;
        double total = 0.0;
        for (int i = 0; i < reps; ++i)
            total += gen.generatePassive(s, truth.orientations[50], 3, 0).size();
        const double mean = total / reps;
        const double keep = 1.0 - gen.stats().rejectionRate();
        CHECK(gen.stats().objectRejected > 0);
        // emitted rate must match mu_m times the audited keep fraction
        CHECK(mean == doctest::Approx(strict.muMeas * keep).epsilon(0.05));
    }
}

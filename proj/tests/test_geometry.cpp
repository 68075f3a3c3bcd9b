#include <tcb/geometry.hpp>

#include <gtest/gtest.h>

#include <random>

namespace tcb {
namespace {

BBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-50.0, 50.0);
    std::uniform_real_distribution<double> size(0.5, 40.0);
    return BBox{pos(rng), pos(rng), size(rng), size(rng)};
}

TEST(Iou, IdenticalBoxesGiveOne) {
    const BBox box{3.0, 4.0, 10.0, 12.0};
    EXPECT_EQ(iou(box, box), 1.0);
}

TEST(Iou, DisjointBoxesGiveZero) {
    EXPECT_EQ(iou(BBox{0, 0, 10, 10}, BBox{100, 100, 10, 10}), 0.0);
}

TEST(Iou, HalfOverlapIsOneThird) {
    // intersection 50, union 150
    EXPECT_DOUBLE_EQ(iou(BBox{0, 0, 10, 10}, BBox{5, 0, 10, 10}), 1.0 / 3.0);
}

TEST(Iou, SymmetricOverRandomBoxes) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const BBox a = random_box(rng);
        const BBox b = random_box(rng);
        const double ab = iou(a, b);
        EXPECT_EQ(ab, iou(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_EQ(iou(a, a), 1.0);
    }
}

TEST(FuseScore, MatchesFormula) {
    const std::vector<double> single{1.0};
    EXPECT_EQ(fuse_score(1.0, single), 1.0);
    const std::vector<double> two{0.3, 0.5};
    EXPECT_DOUBLE_EQ(fuse_score(0.8, two), 0.4);
    const std::vector<double> high{0.9};
    EXPECT_EQ(fuse_score(0.0, high), 0.0);
}

TEST(FuseScore, EmptyClassListRejected) {
    EXPECT_THROW(fuse_score(0.5, {}), ValidationError);
}

TEST(Nms, SingleBoxKept) {
    const std::vector<ScoredBox> one{ScoredBox::make(BBox{0, 0, 10, 10}, 0.9, {1.0})};
    EXPECT_EQ(nms(one, 0.5), std::vector<std::size_t>{0});
}

TEST(Nms, FullOverlapSuppressed) {
    const std::vector<ScoredBox> boxes{
        ScoredBox::make(BBox{0, 0, 10, 10}, 0.8, {1.0}),
        ScoredBox::make(BBox{0, 0, 10, 10}, 0.9, {1.0}),
    };
    EXPECT_EQ(nms(boxes, 0.5), std::vector<std::size_t>{1});
}

TEST(Nms, SuppressionAtExactThirdOverlap) {
    // boxes 0 and 2 overlap at IoU 1/3 > 0.3, box 1 is far away
    const std::vector<ScoredBox> boxes{
        ScoredBox::make(BBox{0, 0, 10, 10}, 0.9, {1.0}),
        ScoredBox::make(BBox{200, 200, 10, 10}, 0.8, {1.0}),
        ScoredBox::make(BBox{5, 0, 10, 10}, 0.7, {1.0}),
    };
    const auto kept = nms(boxes, 0.3);
    EXPECT_EQ(kept, (std::vector<std::size_t>{0, 1}));
}

TEST(Nms, EmptyInput) {
    EXPECT_TRUE(nms({}, 0.5).empty());
}

TEST(Nms, TieBreaksByLowerIndex) {
    const std::vector<ScoredBox> boxes{
        ScoredBox::make(BBox{0, 0, 10, 10}, 0.9, {1.0}),
        ScoredBox::make(BBox{0, 0, 10, 10}, 0.9, {1.0}),
    };
    EXPECT_EQ(nms(boxes, 0.5), std::vector<std::size_t>{0});
}

TEST(Nms, KeptSetValidAgainstBruteCheck) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> conf(0.1, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScoredBox> boxes;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            boxes.push_back(ScoredBox::make(random_box(rng), conf(rng), {1.0}));
        }
        const double threshold = 0.4;
        const auto kept = nms(boxes, threshold);

        // kept indices unique, descending score
        std::vector<char> is_kept(boxes.size(), 0);
        for (std::size_t i = 0; i < kept.size(); ++i) {
            EXPECT_LT(kept[i], boxes.size());
            EXPECT_FALSE(is_kept[kept[i]]);
            is_kept[kept[i]] = 1;
            if (i > 0) EXPECT_GE(boxes[kept[i - 1]].fused, boxes[kept[i]].fused);
        }
        // no two kept overlap above threshold
        for (std::size_t i = 0; i < kept.size(); ++i) {
            for (std::size_t j = i + 1; j < kept.size(); ++j) {
                EXPECT_LE(iou(boxes[kept[i]].box, boxes[kept[j]].box), threshold);
            }
        }
        // every suppressed box overlaps some kept higher-scored box
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (is_kept[b]) continue;
            bool justified = false;
            for (const std::size_t k : kept) {
                if (iou(boxes[k].box, boxes[b].box) > threshold &&
                    (boxes[k].fused > boxes[b].fused ||
                     (boxes[k].fused == boxes[b].fused && k < b))) {
                    justified = true;
                    break;
                }
            }
            EXPECT_TRUE(justified) << "suppressed box " << b << " has no suppressor";
        }
    }
}

}  // namespace
}  // namespace tcb

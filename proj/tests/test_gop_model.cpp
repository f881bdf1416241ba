#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "ogop/gop_model.h"

using namespace ogop;

namespace {

// Independent oracle: Tid is the depth of the dyadic interval recursion
// that produces the offset as a midpoint; the anchor is depth 0.
std::map<int, int> tid_oracle(int gop_size) {
  std::map<int, int> tids;
  tids[gop_size] = 0;
  std::function<void(int, int, int)> rec = [&](int lo, int hi, int depth) {
    if (hi - lo <= 1) return;
    const int mid = (lo + hi) / 2;
    tids[mid] = depth;
    rec(lo, mid, depth + 1);
    rec(mid, hi, depth + 1);
  };
  rec(0, gop_size, 1);
  return tids;
}

// Independent oracle: decode order must be topological over the dyadic
// bracket references (both interval endpoints precede the midpoint; offset
// 0 belongs to the previous GOP and counts as already decoded).
bool decode_order_topological(const std::vector<int>& order, int gop_size) {
  std::set<int> decoded{0};
  for (int offset : order) {
    if (offset != gop_size) {
      const int lowbit = offset & (-offset);
      if (!decoded.count(offset - lowbit)) return false;
      if (!decoded.count(offset + lowbit)) return false;
    }
    decoded.insert(offset);
  }
  return true;
}

bool is_topological(const CodedSequence& seq) {
  for (const Picture& p : seq.pictures) {
    for (int r : p.refs) {
      if (seq.at_poc(r).decode_idx >= p.decode_idx) return false;
    }
    if (p.collocated_ref &&
        seq.at_poc(*p.collocated_ref).decode_idx >= p.decode_idx) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("tid_of matches the dyadic hierarchy") {
  CHECK(tid_of(8, 8) == 0);  // the anchor is the Tid 0 picture
  CHECK(tid_of(4, 8) == 1);
  CHECK(tid_of(6, 8) == 2);
  CHECK(tid_of(5, 8) == 3);
  CHECK(tid_of(16, 32) == 1);
  CHECK(tid_of(1, 1) == 0);

  for (int g : {1, 2, 4, 8, 16, 32}) {
    const auto oracle = tid_oracle(g);
    for (int o = 1; o <= g; ++o) {
      CAPTURE(g);
      CAPTURE(o);
      CHECK(tid_of(o, g) == oracle.at(o));
    }
  }
}

TEST_CASE("tid_of rejects bad arguments") {
  CHECK_THROWS_AS(tid_of(0, 8), std::invalid_argument);
  CHECK_THROWS_AS(tid_of(9, 8), std::invalid_argument);
  CHECK_THROWS_AS(tid_of(3, 12), std::invalid_argument);
  CHECK_THROWS_AS(tid_of(1, 0), std::invalid_argument);
}

TEST_CASE("tid counts for GOP 8 follow the hierarchy") {
  std::map<int, int> counts;
  for (int o = 1; o <= 8; ++o) ++counts[tid_of(o, 8)];
  CHECK(counts == std::map<int, int>{{0, 1}, {1, 1}, {2, 2}, {3, 4}});
}

TEST_CASE("build_decode_order") {
  CHECK(build_decode_order(1) == std::vector<int>{1});
  CHECK(build_decode_order(8) == std::vector<int>{8, 4, 2, 1, 3, 6, 5, 7});
  CHECK_THROWS_AS(build_decode_order(12), std::invalid_argument);
  CHECK_THROWS_AS(build_decode_order(0), std::invalid_argument);

  for (int g : {2, 4, 8, 16, 32}) {
    const auto order = build_decode_order(g);
    CHECK(static_cast<int>(order.size()) == g);
    CHECK(order.front() == g);
    std::set<int> unique(order.begin(), order.end());
    CHECK(static_cast<int>(unique.size()) == g);
    CHECK(*unique.begin() == 1);
    CHECK(*unique.rbegin() == g);
    CHECK(decode_order_topological(order, g));
  }
}

TEST_CASE("build_sequence open GOP structure") {
  GopConfig config{32, 64, IrapMode::OpenGop, 64};
  const CodedSequence seq = build_sequence(config, 129);

  CHECK(seq.at_poc(0).kind == PictureKind::Idr);
  CHECK(seq.at_poc(64).kind == PictureKind::Cra);
  CHECK(seq.at_poc(128).kind == PictureKind::Cra);
  CHECK(seq.at_poc(64).refs.empty());

  const auto leading = leading_pictures(seq, 64);
  CHECK(leading.size() == 31);
  CHECK(leading.front() == 33);
  CHECK(leading.back() == 63);
  for (int poc : leading) CHECK(seq.at_poc(poc).kind == PictureKind::Rasl);

  // No other picture is RASL-marked for this CRA.
  int rasl_total = 0;
  for (const Picture& p : seq.pictures) {
    if (p.kind == PictureKind::Rasl) ++rasl_total;
  }
  CHECK(rasl_total == 31 * 2);  // one set per CRA at 64 and 128
}

TEST_CASE("build_sequence closed GOP has no RASL and no IDR crossing") {
  GopConfig config{8, 64, IrapMode::ClosedGop, 64};
  const CodedSequence seq = build_sequence(config, 65);

  CHECK(seq.at_poc(64).kind == PictureKind::Idr);
  for (const Picture& p : seq.pictures) {
    CHECK(p.kind != PictureKind::Rasl);
    CHECK(p.kind != PictureKind::Radl);
  }
  CHECK(leading_pictures(seq, 64).empty());
  CHECK(validate_structure(seq).empty());

  // The truncated tail decodes before the IDR.
  for (int poc = 57; poc <= 63; ++poc) {
    CHECK(seq.at_poc(poc).decode_idx < seq.at_poc(64).decode_idx);
  }
}

TEST_CASE("cross-boundary reference subset of a RASL set") {
  // For GOP 8 the RASL pictures whose dyadic interval starts at the
  // previous anchor reference across the segment boundary.
  GopConfig config{8, 64, IrapMode::OpenGop, 64};
  const CodedSequence seq = build_sequence(config, 65);

  std::set<int> crossing;
  for (int poc : leading_pictures(seq, 64)) {
    for (int r : seq.at_poc(poc).refs) {
      if (r <= 56) crossing.insert(poc);
    }
  }
  CHECK(crossing == std::set<int>{57, 58, 60});
}

TEST_CASE("build_sequence rejects inconsistent configs") {
  CHECK_THROWS_AS(build_sequence({12, 64, IrapMode::OpenGop, 64}, 65),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sequence({8, 60, IrapMode::OpenGop, 60}, 61),
                  std::invalid_argument);  // irap not multiple of gop
  CHECK_THROWS_AS(build_sequence({64, 64, IrapMode::OpenGop, 64}, 65),
                  std::invalid_argument);  // beyond the DPB bound
  CHECK_THROWS_AS(build_sequence({8, 64, IrapMode::OpenGop, 64}, 66),
                  std::invalid_argument);  // not 1 + whole GOPs
  CHECK_THROWS_AS(build_sequence({8, 64, IrapMode::OpenGop, 48}, 65),
                  std::invalid_argument);  // segment does not divide irap
}

TEST_CASE("decode order is topological for every config") {
  for (int g : {1, 2, 4, 8, 16, 32}) {
    for (int irap : {64, 128, 256}) {
      for (IrapMode mode :
           {IrapMode::ClosedGop, IrapMode::OpenGop, IrapMode::ConstrainedOpenGop}) {
        GopConfig config{g, irap, mode, irap};
        const CodedSequence seq = build_sequence(config, irap + 1);
        CAPTURE(g);
        CAPTURE(irap);
        CHECK(is_topological(seq));
        CHECK(validate_structure(seq).empty());
      }
    }
  }
}

TEST_CASE("RASL count per GOP-aligned CRA is gop_size - 1") {
  for (int g : {8, 16, 32}) {
    for (int irap : {64, 128, 256}) {
      GopConfig config{g, irap, IrapMode::OpenGop, irap};
      const CodedSequence seq = build_sequence(config, 2 * irap + 1);
      for (int cra = irap; cra < seq.length; cra += irap) {
        CAPTURE(g);
        CAPTURE(irap);
        CAPTURE(cra);
        const auto leading = leading_pictures(seq, cra);
        CHECK(static_cast<int>(leading.size()) == g - 1);
        for (int poc : leading) {
          CHECK(seq.at_poc(poc).kind == PictureKind::Rasl);
        }
      }
    }
  }
}

TEST_CASE("tid depends only on the offset within the GOP") {
  GopConfig config{8, 64, IrapMode::OpenGop, 64};
  const CodedSequence seq = build_sequence(config, 129);
  for (int poc = 1; poc < seq.length; ++poc) {
    const int offset = (poc - 1) % 8 + 1;
    const int expected = poc % 64 == 0 ? 0 : tid_of(offset, 8);
    CHECK(seq.at_poc(poc).tid == expected);
  }
}

TEST_CASE("segments partition the decode order") {
  for (int seg_len : {32, 64}) {
    GopConfig config{32, 64, IrapMode::OpenGop, seg_len};
    const CodedSequence seq = build_sequence(config, 193);
    std::vector<int> concat;
    for (const Segment& s : seq.segments) {
      for (int poc : s.picture_pocs) {
        concat.push_back(poc);
        CHECK(seq.at_poc(poc).segment_index == s.index);
      }
      CHECK(s.duration_pics == static_cast<int>(s.picture_pocs.size()));
    }
    CHECK(concat == decode_order(seq));
  }
}

TEST_CASE("low-latency segmentation yields segments without an IRAP") {
  GopConfig config{32, 64, IrapMode::OpenGop, 32};
  const CodedSequence seq = build_sequence(config, 129);
  int with_irap = 0, without = 0;
  for (const Segment& s : seq.segments) {
    if (s.starts_with_irap) ++with_irap;
    else ++without;
  }
  CHECK(with_irap > 0);
  CHECK(without > 0);
  // Segment 0 holds the lone IDR, then anchors and CRAs alternate.
  CHECK(seq.segments[0].starts_with_irap);
  CHECK_FALSE(seq.segments[1].starts_with_irap);
  CHECK(seq.at_poc(seq.segments[2].picture_pocs.front()).kind ==
        PictureKind::Cra);
}

TEST_CASE("validate_structure reports seeded faults") {
  GopConfig config{8, 64, IrapMode::OpenGop, 64};
  const CodedSequence clean = build_sequence(config, 65);
  CHECK(validate_structure(clean).empty());

  SUBCASE("reference that does not precede in decode order") {
    CodedSequence bad = clean;
    bad.pictures[5].refs = {7};  // POC 7 decodes after POC 5
    const auto violations = validate_structure(bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].poc == 5);
    CHECK(violations[0].rule == "ref-decode-order");
  }

  SUBCASE("temporal layering violation") {
    CodedSequence bad = clean;
    // POC 2 references the Tid 1 picture at POC 4; demoting POC 2 to a
    // lower layer makes that reference climb the hierarchy.
    bad.pictures[2].tid = 0;
    const auto violations = validate_structure(bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].poc == 2);
    CHECK(violations[0].rule == "ref-tid");
  }

  SUBCASE("IDR with references") {
    CodedSequence bad = clean;
    bad.pictures[0].refs = {0};
    const auto violations = validate_structure(bad);
    CHECK(!violations.empty());
    bool found = false;
    for (const auto& v : violations) found |= v.rule == "idr-refs-empty";
    CHECK(found);
  }

  SUBCASE("segment flag mismatch") {
    CodedSequence bad = clean;
    bad.segments[1].starts_with_irap = false;
    const auto violations = validate_structure(bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].rule == "segment-irap-flag");
  }
}

TEST_CASE("minimal sequences") {
  // lone stream-start IDR
  const CodedSequence lone = build_sequence({8, 64, IrapMode::OpenGop, 64}, 1);
  CHECK(lone.length == 1);
  CHECK(lone.pictures[0].kind == PictureKind::Idr);
  REQUIRE(lone.segments.size() == 1);
  CHECK(lone.segments[0].starts_with_irap);
  CHECK(validate_structure(lone).empty());

  // one GOP, no CRA yet
  const CodedSequence one_gop = build_sequence({8, 64, IrapMode::OpenGop, 64}, 9);
  CHECK(validate_structure(one_gop).empty());
  for (const Picture& p : one_gop.pictures) {
    CHECK(p.kind != PictureKind::Rasl);
  }
}

TEST_CASE("leading_pictures contract") {
  GopConfig config{8, 64, IrapMode::OpenGop, 64};
  const CodedSequence seq = build_sequence(config, 129);
  const Picture& cra = seq.at_poc(64);
  for (int poc : leading_pictures(seq, 64)) {
    const Picture& p = seq.at_poc(poc);
    CHECK(p.decode_idx > cra.decode_idx);
    CHECK(p.poc < 64);
  }
  CHECK(leading_pictures(seq, 0).empty());
}

// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>

#include "lncw/family.h"
#include "lncw/netmodel.h"
#include "oracles.h"

namespace lncw {
namespace {

bool HasPrefix(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

std::vector<std::string> SetSources(const NetworkGraph& g, int i) {
  std::vector<std::string> out;
  for (const auto& s : g.sources()) {
    const std::string& name = g.node_name(s.node);
    if (name.rfind("s_" + std::to_string(i) + "_", 0) == 0) out.push_back(name);
  }
  return out;
}

TEST(ValidateNetwork, FamilyInstanceIsClean) {
  const ValidationReport r = ValidateNetwork(BuildMNetwork(2, 1));
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ValidateNetwork, TerminalOutEdge) {
  NetworkGraph g;
  const int s = g.AddNode("s"), t = g.AddNode("t");
  g.AddSource(s, "X");
  g.AddTerminal(t, {"X"});
  g.AddEdge(s, t);
  g.AddEdge(t, s);
  const ValidationReport r = ValidateNetwork(g);
  EXPECT_TRUE(HasPrefix(r.violations, "terminal has out-edge"));
  EXPECT_TRUE(HasPrefix(r.violations, "source has in-edge"));
  EXPECT_TRUE(HasPrefix(r.violations, "cycle detected"));
}

TEST(ValidateNetwork, UndemandedSourceAndUnknownDemand) {
  NetworkGraph g;
  const int s = g.AddNode("s_9"), t = g.AddNode("t");
  g.AddSource(s, "X9");
  g.AddTerminal(t, {"Y"});
  g.AddEdge(s, t);
  const ValidationReport r = ValidateNetwork(g);
  EXPECT_TRUE(HasPrefix(r.warnings, "undemanded source"));
  EXPECT_TRUE(HasPrefix(r.violations, "terminal t demands unknown message"));
}

TEST(NetworkGraph, RejectsDuplicates) {
  NetworkGraph g;
  const int a = g.AddNode("a");
  EXPECT_THROW(g.AddNode("a"), std::invalid_argument);
  g.AddSource(a, "X");
  EXPECT_THROW(g.AddSource(a, "Z"), std::invalid_argument);
  const int b = g.AddNode("b");
  EXPECT_THROW(g.AddSource(b, "X"), std::invalid_argument);
}

TEST(NetworkGraph, DemandsResolveWhenSourcesArriveLate) {
  NetworkGraph g;
  const int t = g.AddNode("t"), s = g.AddNode("s");
  g.AddTerminal(t, {"X"});
  EXPECT_THROW(g.DemandSlots(0), std::invalid_argument);
  g.AddSource(s, "X");
  EXPECT_EQ(g.DemandSlots(0), std::vector<int>{0});
  EXPECT_EQ(g.DemandNodes(0), std::vector<int>{s});
}

TEST(TopoOrder, Examples) {
  NetworkGraph chain;
  const int a = chain.AddNode("a"), b = chain.AddNode("b");
  chain.AddEdge(a, b);
  EXPECT_EQ(TopoOrder(chain), (std::vector<int>{a, b}));

  NetworkGraph iso;
  iso.AddNode("a");
  iso.AddNode("b");
  EXPECT_EQ(TopoOrder(iso), (std::vector<int>{0, 1}));

  NetworkGraph rev;
  const int x = rev.AddNode("x"), y = rev.AddNode("y");
  rev.AddEdge(y, x);
  EXPECT_EQ(TopoOrder(rev), (std::vector<int>{y, x}));
}

TEST(TopoOrder, CycleNamesAnEdge) {
  NetworkGraph g;
  const int a = g.AddNode("a"), b = g.AddNode("b");
  g.AddEdge(a, b);
  g.AddEdge(b, a);
  try {
    TopoOrder(g);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("->"), std::string::npos);
  }
}

TEST(TopoOrder, FamilyLayers) {
  const NetworkGraph g = BuildMNetwork(2, 1);
  const auto order = TopoOrder(g);
  auto layer = [&](int v) {
    switch (g.node_name(v)[0]) {
      case 's': return 0;
      case 'u': return 1;
      case 'v': return 2;
      default: return 3;
    }
  };
  for (size_t i = 1; i < order.size(); ++i) EXPECT_LE(layer(order[i - 1]), layer(order[i]));
  for (const Edge& e : g.edges()) {
    EXPECT_LT(std::find(order.begin(), order.end(), e.tail) - order.begin(),
              std::find(order.begin(), order.end(), e.head) - order.begin());
  }
}

TEST(RateUpperBound, Examples) {
  const RateBound b21 = RateUpperBound(BuildMNetwork(2, 1), SetSources(BuildMNetwork(2, 1), 1));
  EXPECT_EQ(b21.cut, 2);
  EXPECT_EQ(b21.set_size, 2);
  EXPECT_EQ(b21.bound().ToString(), "1");
  const NetworkGraph g32 = BuildMNetwork(3, 2);
  const RateBound b32 = RateUpperBound(g32, SetSources(g32, 1));
  EXPECT_EQ(b32.cut, 3);
  EXPECT_EQ(b32.set_size, 6);
  EXPECT_EQ(b32.bound().ToString(), "1/2");
  const NetworkGraph p = BuildParallel(4, 1, 2);
  const RateBound bp = RateUpperBound(p, SetSources(p, 1));
  EXPECT_EQ(bp.cut, 8);
  EXPECT_EQ(bp.set_size, 4);
  EXPECT_EQ(bp.bound().ToString(), "2");
}

TEST(RateUpperBound, Errors) {
  const NetworkGraph g = BuildMNetwork(2, 1);
  EXPECT_THROW(RateUpperBound(g, {}), std::invalid_argument);
  EXPECT_THROW(RateUpperBound(g, {"nope"}), std::invalid_argument);
  EXPECT_THROW(RateUpperBound(g, {"u_1"}), std::invalid_argument);
  NetworkGraph lonely;
  const int s = lonely.AddNode("s");
  lonely.AddSource(s, "X");
  EXPECT_THROW(RateUpperBound(lonely, {"s"}), std::invalid_argument);
}

TEST(RateUpperBound, DuplicateNamesCountOnce) {
  const NetworkGraph g = BuildMNetwork(2, 1);
  const RateBound b = RateUpperBound(g, {"s_1_1", "s_1_1"});
  EXPECT_EQ(b.set_size, 1);
}

TEST(RateUpperBound, FamilyGrid) {
  for (int m : {2, 3}) {
    for (int n : {1, 2}) {
      const NetworkGraph g = BuildMNetwork(m, n);
      for (int i = 1; i <= m; ++i) {
        EXPECT_EQ(RateUpperBound(g, SetSources(g, i)).bound(), (Rational{1, n}));
      }
    }
  }
}

TEST(RateUpperBound, ParallelIsKOverN) {
  for (int y : {2, 3}) {
    for (int k : {1, 2}) {
      for (int n : {1, 2}) {
        const int m = y * k;
        if (TerminalCount(m, n) > 20000) continue;
        const NetworkGraph g = BuildParallel(m, n, k, 20000);
        for (int i = 1; i <= m; ++i) {
          EXPECT_EQ(RateUpperBound(g, SetSources(g, i)).bound(), (Rational{k, n}))
              << y << " " << k << " " << n;
        }
      }
    }
  }
}

TEST(RateUpperBound, AgreesWithAugmentingPathOracle) {
  for (int m = 2; m <= 3; ++m) {
    for (int n = 1; n <= 2; ++n) {
      for (int k = 1; k <= 2; ++k) {
        const NetworkGraph g = k == 1 ? BuildMNetwork(m, n) : BuildParallel(m, n, k);
        for (int i = 1; i <= m; ++i) {
          const auto set = SetSources(g, i);
          EXPECT_EQ(RateUpperBound(g, set).cut, oracle::CutOracle(g, set));
          // Mixed sets across groups.
          std::vector<std::string> mixed = {set.front(), SetSources(g, i % m + 1).back()};
          EXPECT_EQ(RateUpperBound(g, mixed).cut, oracle::CutOracle(g, mixed));
        }
        const std::vector<std::string> all = [&] {
          std::vector<std::string> v;
          for (const auto& s : g.sources()) v.push_back(g.node_name(s.node));
          return v;
        }();
        EXPECT_EQ(RateUpperBound(g, all).cut, oracle::CutOracle(g, all));
      }
    }
  }
}

TEST(Rational, Reduction) {
  EXPECT_EQ((Rational{6, 4}).Reduced().ToString(), "3/2");
  EXPECT_EQ((Rational{4, 2}).Reduced().ToString(), "2");
  EXPECT_TRUE((Rational{1, 2}) == (Rational{2, 4}));
}

TEST(MakeLayout, BlocksPartitionCoordinates) {
  const NetworkGraph g = BuildMNetwork(2, 2);
  const MessageLayout l = MakeLayout(g, 3);
  EXPECT_EQ(l.width(), 3 * 8);
  for (size_t s = 0; s < l.messages.size(); ++s) EXPECT_EQ(l.offset(static_cast<int>(s)), 3 * static_cast<int>(s));
}

TEST(NetworkJson, RoundTrip) {
  for (const NetworkGraph& g : {BuildMNetwork(2, 1), BuildMNetwork(3, 2), BuildParallel(2, 1, 2)}) {
    const NetworkGraph back = NetworkFromJson(nlohmann::json::parse(NetworkToJson(g).dump()));
    EXPECT_TRUE(back == g);
  }
  NetworkGraph plain;
  const int s = plain.AddNode("src"), t = plain.AddNode("dst");
  plain.AddEdge(s, t);
  plain.AddSource(s, "M");
  plain.AddTerminal(t, {"M"});
  EXPECT_TRUE(NetworkFromJson(NetworkToJson(plain)) == plain);
}

TEST(NetworkJson, MalformedInput) {
  EXPECT_THROW(NetworkFromJson(nlohmann::json::object()), std::invalid_argument);
  EXPECT_THROW(NetworkFromJson(nlohmann::json::parse(R"({"nodes":["a"],"edges":[["a","b"]]})")),
               std::invalid_argument);
  EXPECT_THROW(NetworkFromJson(nlohmann::json::parse(R"({"nodes":["a"],"edges":[["a"]]})")),
               std::invalid_argument);
}

}  // namespace
}  // namespace lncw

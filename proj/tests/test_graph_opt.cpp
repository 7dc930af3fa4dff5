/* Copyright 2026 The optc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "optc/graph_opt.hpp"
#include "optc/interpreter.hpp"
#include "optc/pruner.hpp"

namespace optc {
namespace {

using testing::Rng;

double max_deviation(const Graph& a, const Graph& b, Rng& rng, int inputs = 10) {
  const auto len = static_cast<std::size_t>(num_elements(a.input_shape));
  double worst = 0;
  for (int i = 0; i < inputs; ++i) {
    const auto x = testing::random_vector(rng, len);
    const auto ya = forward(a, x);
    const auto yb = forward(b, x);
    EXPECT_EQ(ya.size(), yb.size());
    for (std::size_t k = 0; k < ya.size(); ++k) {
      worst = std::max(worst, static_cast<double>(std::abs(ya[k] - yb[k])));
    }
  }
  return worst;
}

using Pass = Graph (*)(const Graph&);
Graph elide(const Graph& g) { return elide_padding(g); }
Graph all(const Graph& g) { return optimize(g); }

TEST(FuseMatmulAdd, PairBecomesGemm) {
  Rng rng(1);
  const auto g = testing::matmul_add_chain(rng, {4, 3});
  const auto f = fuse_matmul_add(g);
  ASSERT_EQ(f.nodes.size(), 1u);
  EXPECT_EQ(f.nodes[0].op, OpKind::FullyConnected);
  EXPECT_EQ(f.nodes[0].weights, g.nodes[0].weights);
  EXPECT_EQ(f.nodes[0].bias, g.nodes[1].bias);
}

TEST(FuseMatmulAdd, FcFormUnchanged) {
  Rng rng(2);
  const auto g = testing::mlp(rng, {5, 6, 3});
  EXPECT_TRUE(structurally_equal(fuse_matmul_add(g), g));
}

TEST(FuseMatmulAdd, BiaslessFcAbsorbsAdd) {
  Rng rng(3);
  Graph g;
  g.input_shape = {4};
  g.nodes.push_back(fully_connected("fc", testing::random_tensor(rng, {3, 4})));
  g.nodes.push_back(bias_add("b", testing::random_tensor(rng, {3})));
  g = validate(g);
  const auto f = fuse_matmul_add(g);
  ASSERT_EQ(f.nodes.size(), 1u);
  EXPECT_TRUE(f.nodes[0].bias.has_value());
  EXPECT_EQ(max_deviation(g, f, rng), 0.0);
}

TEST(FuseMatmulAdd, RandomChainForwardEqual) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const auto g = testing::matmul_add_chain(rng, {9, 13, 7, 5, 4});
    const auto f = fuse_matmul_add(g);
    EXPECT_EQ(f.nodes.size(), g.nodes.size() - 4);
    EXPECT_LE(max_deviation(g, f, rng), 1e-6);
  }
}

TEST(FuseActivation, ConvReluBecomesOneNode) {
  Rng rng(5);
  Graph g;
  g.input_shape = {2, 8};
  g.nodes.push_back(conv1d("c", testing::random_tensor(rng, {3, 2, 3}),
                           testing::random_tensor(rng, {3})));
  g.nodes.push_back(activation("r", OpKind::ReLU));
  g = validate(g);
  const auto f = fuse_activation(g);
  ASSERT_EQ(f.nodes.size(), 1u);
  EXPECT_EQ(f.nodes[0].attrs.activation, Activation::ReLU);
  EXPECT_EQ(max_deviation(g, f, rng), 0.0);
}

TEST(FuseActivation, LeadingActivationUntouched) {
  Rng rng(6);
  Graph g;
  g.input_shape = {4};
  g.nodes.push_back(activation("r", OpKind::ReLU));
  g.nodes.push_back(fully_connected("fc", testing::random_tensor(rng, {3, 4})));
  g = validate(g);
  EXPECT_TRUE(structurally_equal(fuse_activation(g), g));
}

TEST(FuseActivation, SoftmaxNeverFused) {
  Rng rng(7);
  Graph g;
  g.input_shape = {4};
  g.nodes.push_back(fully_connected("fc", testing::random_tensor(rng, {3, 4})));
  g.nodes.push_back(softmax("sm"));
  g = validate(g);
  EXPECT_TRUE(structurally_equal(fuse_activation(g), g));
}

TEST(FuseActivation, FiveOpChain) {
  Rng rng(8);
  Graph g;
  g.input_shape = {7};
  g.nodes.push_back(fully_connected("a", testing::random_tensor(rng, {9, 7}, 0.5f),
                                    testing::random_tensor(rng, {9}, 0.1f)));
  g.nodes.push_back(activation("ta", OpKind::Tanh));
  g.nodes.push_back(fully_connected("b", testing::random_tensor(rng, {6, 9}, 0.5f)));
  g.nodes.push_back(activation("sb", OpKind::Sigmoid));
  g.nodes.push_back(fully_connected("c", testing::random_tensor(rng, {3, 6}, 0.5f)));
  g = validate(g);
  const auto f = fuse_activation(g);
  EXPECT_EQ(f.nodes.size(), 3u);
  EXPECT_LE(max_deviation(g, f, rng), 1e-6);
}

TEST(ElidePadding, FoldsIntoConv) {
  Rng rng(9);
  Graph g;
  g.input_shape = {2, 6};
  g.nodes.push_back(pad1d("p", 1, 1));
  g.nodes.push_back(conv1d("c", testing::random_tensor(rng, {3, 2, 3}), std::nullopt));
  g = validate(g);
  const auto e = elide_padding(g);
  ASSERT_EQ(e.nodes.size(), 1u);
  EXPECT_EQ(e.nodes[0].attrs.pad_begin, 1);
  EXPECT_EQ(e.nodes[0].attrs.pad_end, 1);
  EXPECT_EQ(e.output_shape(), g.output_shape());
}

TEST(ElidePadding, ZeroPadRemovedAnywhere) {
  Rng rng(10);
  Graph g;
  g.input_shape = {4};
  g.nodes.push_back(fully_connected("fc", testing::random_tensor(rng, {3, 4})));
  g.nodes.push_back(pad1d("p", 0, 0));
  g.nodes.push_back(activation("r", OpKind::ReLU));
  g = validate(g);
  const auto e = elide_padding(g);
  EXPECT_EQ(e.nodes.size(), 2u);
}

TEST(ElidePadding, PaddedChainBitExact) {
  Rng rng(11);
  const auto g = testing::padded_conv_chain(rng);
  PassDiagnostics diag;
  const auto e = elide_padding(g, &diag);
  for (const auto& n : e.nodes) EXPECT_NE(n.op, OpKind::Pad);
  EXPECT_TRUE(diag.warnings.empty());
  EXPECT_EQ(max_deviation(g, e, rng), 0.0);
}

TEST(ElidePadding, PadBeforeNonConvWarns) {
  Rng rng(12);
  Graph g;
  g.input_shape = {4};
  g.nodes.push_back(pad1d("p", 1, 2));
  g.nodes.push_back(fully_connected("fc", testing::random_tensor(rng, {3, 7})));
  g = validate(g);
  PassDiagnostics diag;
  const auto e = elide_padding(g, &diag);
  EXPECT_EQ(e.nodes.size(), 2u);
  ASSERT_EQ(diag.warnings.size(), 1u);
  EXPECT_NE(diag.warnings[0].find("'p'"), std::string::npos);
}

TEST(Passes, PreserveSemanticsAndAreIdempotent) {
  Rng rng(13);
  const Pass passes[] = {&fuse_matmul_add, &fuse_activation, &elide, &all};
  for (const auto& entry : testing::corpus(31)) {
    for (auto pass : passes) {
      const auto once = pass(entry.graph);
      const auto twice = pass(once);
      EXPECT_TRUE(structurally_equal(once, twice)) << entry.name;
      EXPECT_LE(once.nodes.size(), entry.graph.nodes.size()) << entry.name;
      EXPECT_LE(max_deviation(entry.graph, once, rng), 1e-6) << entry.name;
    }
  }
}

TEST(Passes, CommuteWithPruning) {
  Rng rng(14);
  std::uniform_real_distribution<double> rate(0.0, 0.8);
  for (const auto& entry : testing::corpus(41)) {
    std::vector<double> rates;
    for (std::size_t i = 0; i < trainable_layers(entry.graph).size(); ++i) {
      rates.push_back(rate(rng));
    }
    const auto pruned_then_opt = optimize(prune_structural(entry.graph, rates).graph);
    const auto opt_then_pruned = prune_structural(optimize(entry.graph), rates).graph;
    EXPECT_LE(max_deviation(pruned_then_opt, opt_then_pruned, rng), 1e-6) << entry.name;
  }
}

}  // namespace
}  // namespace optc

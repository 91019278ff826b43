#include <sstream>

#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/harness/dataset.hpp"
#include "caqs/harness/synthetic.hpp"

namespace caqs::harness {
namespace {

const char* kHeader =
    R"({"schema_version":1,"type":"header","classes":["walk","run"],)"
    R"("attributes":[{"name":"object","kind":"object","dim":2},{"name":"person","kind":"person","bins":4}]})";

Dataset read(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

std::string line(const std::string& id, int label, const std::string& extra = "") {
  return R"({"schema_version":1,"id":")" + id + R"(","features":[1.0,2.0],"t":1.5,"s":[0,1],"label":)" +
         std::to_string(label) + extra + "}\n";
}

TEST(Dataset, ReadsHeaderAndInstances) {
  const Dataset d = read(std::string(kHeader) + "\n" +
                         line("a1", 0, R"(,"split":"train","group":3,"context":[{"kind":"object","pmf":[0.3,0.7],"s":[1,1]},{"kind":"person","value":1.2,"s":[0,0]}])") +
                         line("a2", 1, R"(,"split":"test")"));
  EXPECT_EQ(d.class_names, (std::vector<std::string>{"walk", "run"}));
  ASSERT_EQ(d.attributes.size(), 2u);
  EXPECT_EQ(d.attributes[1].dim, 4u);
  ASSERT_EQ(d.instances.size(), 2u);
  EXPECT_EQ(d.instances[0].group, 3);
  EXPECT_EQ(d.instances[0].context.size(), 2u);
  EXPECT_EQ(*d.instances[0].context[1].value, 1.2);
  EXPECT_EQ(d.train, (std::vector<std::size_t>{0}));
  EXPECT_EQ(d.test, (std::vector<std::size_t>{1}));
}

TEST(Dataset, NoSplitsMeansAllTrain) {
  const Dataset d = read(std::string(kHeader) + "\n" + line("a1", 0) + line("a2", 1));
  EXPECT_EQ(d.train.size(), 2u);
  EXPECT_TRUE(d.test.empty());
}

TEST(Dataset, RejectsBadInput) {
  EXPECT_THROW(read(line("a1", 0)), InvalidInput);                                   // no header
  EXPECT_THROW(read(std::string(kHeader) + "\n" + line("a1", 2)), InvalidInput);     // label >= q
  EXPECT_THROW(read(std::string(kHeader) + "\n" + line("a1", 0) + line("a1", 1)), InvalidInput);
  EXPECT_THROW(read(std::string(kHeader) + "\n{not json\n"), InvalidInput);
  std::string wrong_version = kHeader;
  wrong_version.replace(wrong_version.find("\"schema_version\":1"), 18, "\"schema_version\":7");
  EXPECT_THROW(read(wrong_version + "\n" + line("a1", 0)), InvalidInput);
  EXPECT_THROW(read(std::string(kHeader) + "\n" + line("a1", 0, R"(,"context":[{"kind":"chair","pmf":[1,0]}])")),
               InvalidInput);
}

TEST(Dataset, RoundTripPreservesSynthetic) {
  SyntheticConfig cfg;
  cfg.instances = 60;
  cfg.feature_dim = 3;
  const Dataset d = generate_synthetic(cfg);
  std::stringstream buffer;
  write_dataset(buffer, d);
  const Dataset back = read_dataset(buffer);
  ASSERT_EQ(back.instances.size(), d.instances.size());
  EXPECT_EQ(back.class_names, d.class_names);
  EXPECT_EQ(back.train, d.train);
  EXPECT_EQ(back.test, d.test);
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    const auto& a = d.instances[i];
    const auto& b = back.instances[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.features, b.features);
    EXPECT_EQ(a.time, b.time);
    EXPECT_EQ(a.position, b.position);
    EXPECT_EQ(a.true_label, b.true_label);
    EXPECT_EQ(a.group, b.group);
    ASSERT_EQ(a.context.size(), b.context.size());
    EXPECT_EQ(*a.context[0].pmf, *b.context[0].pmf);
    EXPECT_EQ(*a.context[1].value, *b.context[1].value);
  }
}

}  // namespace
}  // namespace caqs::harness

// Walks the library end to end on a 4-bit universe with three classes:
// build the model, print the index table and coordinate tags, then run
// classification, compression and decoding against it.

#include <cstdio>

#include "cmc/model.hpp"
#include "cmc/relevance.hpp"
#include "cmc/space.hpp"
#include "cmc/tasks.hpp"

using namespace cmc;

int main() {
  const auto family = space::SubsetFamily::create(
      space::Universe::full(4),
      {{"C1", {BitVector::from_string("0010"), BitVector::from_string("0101"),
               BitVector::from_string("1000"), BitVector::from_string("1100")}},
       {"C2", {BitVector::from_string("0110"), BitVector::from_string("1111")}},
       {"C3", {BitVector::from_string("0111"), BitVector::from_string("1001")}}});

  const auto m = model::build_common_complete_model(family, /*pad=*/false);

  std::printf("index -> element (classes first, then X - C)\n");
  for (std::uint64_t s = 0; s < m.slot_count(); ++s) {
    const auto* block = m.block_of_slot(s);
    std::printf("  %s -> %s%s%s\n", m.index_pattern(s).to_string().c_str(),
                m.slots[s]->to_string().c_str(), block ? "   " : "",
                block ? block->label.c_str() : "");
  }

  std::printf("\ncoordinates:\n");
  for (std::size_t i = 0; i < m.n_bits; ++i)
    std::printf("  bit %zu: %s\n", i, model::tag_name(m.coordinate_classes[i].tag));

  const BitVector probe = BitVector::from_string("0110");
  const auto label = tasks::classify(probe, m);
  std::printf("\nclassify(%s) = %s\n", probe.to_string().c_str(),
              label ? label->c_str() : "outlier");

  const auto code = tasks::compress(probe, m);
  std::printf("compress(%s) = class %s + %zu free bit(s) '%s'\n", probe.to_string().c_str(),
              code.class_label.c_str(), code.irrelevant_bits.size(),
              code.irrelevant_bits.to_string().c_str());
  std::printf("decompress -> %s\n", tasks::decompress(code, m).to_string().c_str());

  std::printf("\nuniform draws from C1:");
  for (std::uint64_t seed = 0; seed < 6; ++seed)
    std::printf(" %s", tasks::decode(m, "C1", seed).to_string().c_str());
  std::printf("\n");
  return 0;
}

#pragma once

#include <string>
#include <vector>

#include "amrsumm/amr.hpp"

namespace amrsumm {

// One document of the JSON-lines corpus format:
//   {"id": str, "sentences": [str], "amrs": [penman str],
//    "summary": str, "summary_amr": penman str}
// `amrs` aligns with `sentences`; both summary fields are optional in data
// that is only used for training.
struct Document {
  std::string id;
  std::vector<std::string> sentences;
  std::vector<std::string> amrs;  // PENMAN text, aligned with sentences
  std::string summary;
  std::string summary_amr;
};

std::vector<Document> read_jsonl_corpus(const std::string& path);
void write_jsonl_corpus(const std::vector<Document>& docs, const std::string& path);

}  // namespace amrsumm

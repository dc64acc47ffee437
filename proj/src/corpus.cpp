#include "amrsumm/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace amrsumm {

std::vector<Document> read_jsonl_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);

  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad json: " + e.what());
    }
    Document d;
    d.id = j.value("id", "doc" + std::to_string(line_no));
    for (const auto& s : j.value("sentences", nlohmann::json::array()))
      d.sentences.push_back(s.get<std::string>());
    for (const auto& a : j.value("amrs", nlohmann::json::array()))
      d.amrs.push_back(a.get<std::string>());
    d.summary = j.value("summary", "");
    d.summary_amr = j.value("summary_amr", "");
    if (!d.amrs.empty() && d.amrs.size() != d.sentences.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": sentences/amrs length mismatch in document " + d.id);
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_jsonl_corpus(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open corpus for writing: " + path);
  for (const Document& d : docs) {
    nlohmann::json j{{"id", d.id},
                     {"sentences", d.sentences},
                     {"amrs", d.amrs},
                     {"summary", d.summary},
                     {"summary_amr", d.summary_amr}};
    out << j.dump() << '\n';
  }
}

}  // namespace amrsumm

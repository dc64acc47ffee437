#include "amrsumm/amr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace amrsumm {

TokenSeq split_tokens(const std::string& line) {
  TokenSeq out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

const AmrNode* AmrGraph::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<std::size_t> AmrGraph::out_edges(const std::string& id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].source == id) out.push_back(i);
  return out;
}

std::vector<std::string> AmrGraph::unreachable_nodes() const {
  std::unordered_set<std::string> seen;
  std::deque<std::string> queue;
  if (find_node(root)) {
    seen.insert(root);
    queue.push_back(root);
  }
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& e : edges) {
      if (e.source == cur && !seen.count(e.target)) {
        seen.insert(e.target);
        queue.push_back(e.target);
      }
    }
  }
  std::vector<std::string> missing;
  for (const auto& n : nodes)
    if (!seen.count(n.id)) missing.push_back(n.id);
  return missing;
}

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("penman parse error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace {

enum class TokKind { LParen, RParen, Slash, Role, Atom, Str, End };

struct Tok {
  TokKind kind;
  std::string text;  // without quotes for Str
  std::size_t offset;
};

bool is_atom_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '/' &&
         c != '"';
}

std::vector<Tok> lex_penman(const std::string& text) {
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      toks.push_back({TokKind::LParen, "(", i});
      ++i;
    } else if (c == ')') {
      toks.push_back({TokKind::RParen, ")", i});
      ++i;
    } else if (c == '/') {
      toks.push_back({TokKind::Slash, "/", i});
      ++i;
    } else if (c == '"') {
      std::size_t start = i++;
      std::string body;
      while (i < text.size() && text[i] != '"') {
        body += (text[i] == '\\' && i + 1 < text.size()) ? text[++i] : text[i];
        ++i;
      }
      if (i >= text.size()) throw ParseError(start, "unterminated string constant");
      ++i;  // closing quote
      toks.push_back({TokKind::Str, body, start});
    } else {
      std::size_t start = i;
      std::string body;
      while (i < text.size() && is_atom_char(text[i])) body += text[i++];
      toks.push_back({body[0] == ':' ? TokKind::Role : TokKind::Atom, body, start});
    }
  }
  toks.push_back({TokKind::End, "", text.size()});
  return toks;
}

// Whitespace inside string constants would break the token-sequence contract
// downstream, so it is folded to underscores.
std::string sanitize_constant(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  return out.empty() ? "_" : out;
}

class PenmanParser {
 public:
  explicit PenmanParser(const std::string& text) : toks_(lex_penman(text)) {
    // Prescan variable introductions so bare mentions resolve even when the
    // reference precedes the introduction.
    for (std::size_t i = 0; i + 2 < toks_.size(); ++i) {
      if (toks_[i].kind == TokKind::LParen && toks_[i + 1].kind == TokKind::Atom &&
          toks_[i + 2].kind == TokKind::Slash)
        variables_.insert(toks_[i + 1].text);
    }
  }

  AmrGraph parse() {
    const Tok& first = peek();
    if (first.kind != TokKind::LParen)
      throw ParseError(first.offset, "expected '(' to open the root expression");
    graph_.root = parse_node();
    const Tok& tail = peek();
    if (tail.kind == TokKind::RParen) throw ParseError(tail.offset, "unbalanced parentheses");
    if (tail.kind != TokKind::End)
      throw ParseError(tail.offset, "trailing content after root expression");
    return std::move(graph_);
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }
  const Tok& take() { return toks_[pos_++]; }

  std::string fresh_constant_id() {
    std::string id;
    do {
      id = "_c" + std::to_string(constant_counter_++);
    } while (variables_.count(id));
    return id;
  }

  // node := '(' var '/' concept-label relation* ')'
  std::string parse_node() {
    take();  // '('
    const Tok& var = take();
    if (var.kind != TokKind::Atom)
      throw ParseError(var.offset, "expected a variable name after '('");
    if (introduced_.count(var.text))
      throw ParseError(var.offset, "duplicate variable introduction '" + var.text + "'");
    const Tok& slash = take();
    if (slash.kind != TokKind::Slash)
      throw ParseError(slash.offset, "missing '/' after new variable '" + var.text + "'");
    const Tok& label = take();
    if (label.kind != TokKind::Atom && label.kind != TokKind::Str)
      throw ParseError(label.offset, "expected a concept label after '/'");
    introduced_.insert(var.text);
    graph_.nodes.push_back({var.text, sanitize_constant(label.text)});

    while (true) {
      const Tok& t = peek();
      if (t.kind == TokKind::RParen) {
        take();
        return var.text;
      }
      if (t.kind == TokKind::Role) {
        const Tok& role = take();
        graph_.edges.push_back({var.text, role.text, parse_target(role)});
        continue;
      }
      if (t.kind == TokKind::End) throw ParseError(t.offset, "unbalanced parentheses");
      throw ParseError(t.offset, "expected a relation or ')'");
    }
  }

  std::string parse_target(const Tok& role) {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::LParen:
        return parse_node();
      case TokKind::Atom: {
        take();
        if (variables_.count(t.text)) return t.text;  // re-entrant mention
        std::string id = fresh_constant_id();
        graph_.nodes.push_back({id, sanitize_constant(t.text)});
        return id;
      }
      case TokKind::Str: {
        take();
        std::string id = fresh_constant_id();
        graph_.nodes.push_back({id, sanitize_constant(t.text)});
        return id;
      }
      default:
        throw ParseError(t.offset, "dangling relation '" + role.text + "'");
    }
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  std::unordered_set<std::string> variables_;   // all introductions, prescanned
  std::unordered_set<std::string> introduced_;  // seen so far, for duplicates
  std::size_t constant_counter_ = 0;
  AmrGraph graph_;
};

}  // namespace

AmrGraph parse_penman(const std::string& text) { return PenmanParser(text).parse(); }

namespace {

void print_node(const AmrGraph& g, const std::string& id, std::set<std::string>& printed,
                std::string& out) {
  if (printed.count(id)) {
    out += id;  // re-entrant mention
    return;
  }
  printed.insert(id);
  const AmrNode* node = g.find_node(id);
  out += "(" + id + " / " + node->label;
  for (std::size_t ei : g.out_edges(id)) {
    out += " " + g.edges[ei].relation + " ";
    print_node(g, g.edges[ei].target, printed, out);
  }
  out += ")";
}

}  // namespace

std::string to_penman(const AmrGraph& graph) {
  if (!graph.find_node(graph.root))
    throw std::invalid_argument("to_penman: root is not a node of the graph");
  std::string out;
  std::set<std::string> printed;
  print_node(graph, graph.root, printed, out);
  return out;
}

namespace {

std::string strip_sense_suffix(const std::string& label) {
  std::size_t dash = label.rfind('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= label.size()) return label;
  for (std::size_t i = dash + 1; i < label.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return label;
  return label.substr(0, dash);
}

std::string lowercased(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

class Linearizer {
 public:
  Linearizer(const AmrGraph& g, const LinearizeOptions& opts) : g_(g), opts_(opts) {}

  TokenSeq run() {
    visited_.insert(g_.root);
    expand(g_.root, opts_.max_reentrancy_depth);
    return std::move(out_);
  }

 private:
  std::string concept_token(const std::string& id) const {
    std::string c = g_.find_node(id)->label;
    if (opts_.strip_senses) c = strip_sense_suffix(c);
    if (opts_.lowercase) c = lowercased(c);
    return c;
  }

  void expand(const std::string& id, std::size_t budget) {
    out_.push_back("(");
    out_.push_back(concept_token(id));
    for (std::size_t ei : g_.out_edges(id)) {
      const AmrEdge& e = g_.edges[ei];
      if (opts_.strip_wiki && e.relation == ":wiki") continue;
      out_.push_back(opts_.lowercase ? lowercased(e.relation) : e.relation);
      if (!visited_.count(e.target)) {
        visited_.insert(e.target);
        expand(e.target, budget);
      } else if (budget > 0) {
        expand(e.target, budget - 1);
      } else {
        out_.push_back(concept_token(e.target));
      }
    }
    out_.push_back(")");
  }

  const AmrGraph& g_;
  const LinearizeOptions& opts_;
  std::unordered_set<std::string> visited_;
  TokenSeq out_;
};

}  // namespace

TokenSeq linearize(const AmrGraph& graph, const LinearizeOptions& opts) {
  std::vector<std::string> missing = graph.unreachable_nodes();
  if (!missing.empty()) {
    std::string msg = "cannot linearize disconnected graph; unreachable nodes:";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
  return Linearizer(graph, opts).run();
}

AmrGraph merge_graphs(const std::vector<AmrGraph>& graphs) {
  if (graphs.empty()) throw std::invalid_argument("merge_graphs: empty graph list");

  AmrGraph merged;
  std::unordered_map<std::string, std::string> concept_to_id;  // first-seen wins
  std::unordered_set<std::string> used_ids;
  std::set<std::tuple<std::string, std::string, std::string>> edge_set;
  std::vector<std::string> mapped_roots;

  auto unique_id = [&](const std::string& base) {
    std::string id = base;
    for (int k = 2; used_ids.count(id); ++k) id = base + "~" + std::to_string(k);
    return id;
  };

  for (const AmrGraph& g : graphs) {
    std::unordered_map<std::string, std::string> remap;
    for (const AmrNode& n : g.nodes) {
      auto hit = concept_to_id.find(n.label);
      if (hit != concept_to_id.end()) {
        remap[n.id] = hit->second;
        continue;
      }
      std::string id = unique_id(n.id);
      used_ids.insert(id);
      merged.nodes.push_back({id, n.label});
      remap[n.id] = id;
      concept_to_id.emplace(n.label, id);
    }
    for (const AmrEdge& e : g.edges) {
      auto key = std::make_tuple(remap.at(e.source), e.relation, remap.at(e.target));
      if (edge_set.insert(key).second)
        merged.edges.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});
    }
    mapped_roots.push_back(remap.at(g.root));
  }

  std::string root_id = unique_id("m");
  merged.nodes.push_back({root_id, "multi-sentence"});
  merged.root = root_id;
  for (std::size_t i = 0; i < mapped_roots.size(); ++i)
    merged.edges.push_back({root_id, ":snt" + std::to_string(i + 1), mapped_roots[i]});
  return merged;
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<AmrBlock> read_amr_blocks(const std::string& file_contents) {
  std::vector<AmrBlock> blocks;
  AmrBlock cur;
  bool in_block = false;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (in_block && !trimmed(cur.penman).empty()) blocks.push_back(cur);
    cur = AmrBlock{};
    in_block = false;
  };

  std::istringstream in(file_contents);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      cur.line = line_no;
    }
    if (line.rfind("#", 0) == 0) {
      if (line.rfind("# ::id ", 0) == 0) {
        std::istringstream meta(line.substr(7));
        meta >> cur.id;
      } else if (line.rfind("# ::snt ", 0) == 0) {
        cur.sentence = trimmed(line.substr(8));
      }
      continue;
    }
    if (!cur.penman.empty()) cur.penman += "\n";
    cur.penman += line;
  }
  flush();
  return blocks;
}

}  // namespace amrsumm

#include "jsonoid/ingest.hpp"

#include <iterator>
#include <utility>

#include "jsonoid/schema.hpp"  // kMaxNestingDepth

namespace jsonoid {

namespace {

// SAX handler building an ordered document while tracking nesting depth
// and duplicate object keys (last occurrence wins, with a warning).
class DocumentBuilder : public nlohmann::json_sax<Json> {
 public:
  std::vector<std::string> warnings;
  std::string error;

  Json take() { return std::move(root_); }

  bool null() override { return emplace(Json(nullptr)); }
  bool boolean(bool v) override { return emplace(Json(v)); }
  bool number_integer(number_integer_t v) override { return emplace(Json(v)); }
  bool number_unsigned(number_unsigned_t v) override { return emplace(Json(v)); }
  bool number_float(number_float_t v, const string_t&) override { return emplace(Json(v)); }
  bool string(string_t& v) override { return emplace(Json(std::move(v))); }
  bool binary(binary_t&) override {
    error = "binary values are not valid JSON";
    return false;
  }

  bool start_object(std::size_t) override { return push(Json::object()); }
  bool key(string_t& k) override {
    key_ = std::move(k);
    return true;
  }
  bool end_object() override { return pop(); }
  bool start_array(std::size_t) override { return push(Json::array()); }
  bool end_array() override { return pop(); }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    if (error.empty()) error = "at byte " + std::to_string(position) + ": " + ex.what();
    return false;
  }

 private:
  bool push(Json container) {
    if (stack_.size() >= kMaxNestingDepth) {
      error = "nesting depth exceeds " + std::to_string(kMaxNestingDepth);
      return false;
    }
    stack_.push_back(Frame{std::move(container), std::move(key_)});
    return true;
  }

  bool pop() {
    Frame done = std::move(stack_.back());
    stack_.pop_back();
    key_ = std::move(done.pending_key);
    return emplace(std::move(done.node));
  }

  bool emplace(Json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
      return true;
    }
    Frame& top = stack_.back();
    if (top.node.is_object()) {
      if (top.node.contains(key_))
        warnings.push_back("duplicate key '" + key_ + "' (last occurrence wins)");
      top.node[key_] = std::move(value);
    } else {
      top.node.push_back(std::move(value));
    }
    return true;
  }

  struct Frame {
    Json node;
    std::string pending_key;  // object key under which this frame nests
  };

  std::vector<Frame> stack_;
  std::string key_;
  Json root_;
};

constexpr std::size_t kMaxStoredDiagnostics = 1000;

std::string_view strip_bom(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") return text.substr(3);
  return text;
}

bool blank(std::string_view text) {
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

ParsedDocument parse_document(std::string_view text) {
  DocumentBuilder builder;
  if (!Json::sax_parse(text, &builder)) {
    throw ParseError(builder.error.empty() ? "invalid JSON" : builder.error);
  }
  return ParsedDocument{builder.take(), std::move(builder.warnings)};
}

DocumentStream::DocumentStream(std::istream& in, InputFormat format)
    : in_(in), format_(format) {}

void DocumentStream::record(std::uint64_t line, std::string message) {
  if (diagnostics_.size() < kMaxStoredDiagnostics)
    diagnostics_.push_back({line, std::move(message)});
}

std::optional<Json> DocumentStream::next() {
  if (format_ == InputFormat::JsonArray) {
    if (!array_loaded_) {
      array_loaded_ = true;
      std::string all(std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>{});
      try {
        ParsedDocument parsed = parse_document(strip_bom(all));
        for (auto& w : parsed.warnings) {
          ++warnings_;
          record(0, std::move(w));
        }
        if (!parsed.value.is_array()) throw ParseError("input is not a JSON array");
        array_docs_.reserve(parsed.value.size());
        for (auto& v : parsed.value) array_docs_.push_back(std::move(v));
      } catch (const ParseError& e) {
        ++failures_;
        record(0, e.what());
        return std::nullopt;
      }
    }
    if (array_pos_ >= array_docs_.size()) return std::nullopt;
    ++yielded_;
    return std::move(array_docs_[array_pos_++]);
  }

  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    std::string_view text = line;
    if (line_ == 1) text = strip_bom(text);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (blank(text)) continue;
    try {
      ParsedDocument parsed = parse_document(text);
      for (auto& w : parsed.warnings) {
        ++warnings_;
        record(line_, std::move(w));
      }
      ++yielded_;
      return std::move(parsed.value);
    } catch (const ParseError& e) {
      ++failures_;
      record(line_, e.what());
    }
  }
  return std::nullopt;
}

std::vector<std::vector<Json>> partition(std::vector<Json> docs, std::size_t workers) {
  if (workers == 0) throw std::invalid_argument("partition: workers must be positive");
  std::vector<std::vector<Json>> batches(workers);
  const std::size_t base = docs.size() / workers;
  const std::size_t extra = docs.size() % workers;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < workers; ++b) {
    std::size_t take = base + (b < extra ? 1 : 0);
    batches[b].reserve(take);
    for (std::size_t i = 0; i < take; ++i) batches[b].push_back(std::move(docs[pos++]));
  }
  return batches;
}

std::vector<std::vector<Json>> partition(DocumentStream& stream, std::size_t workers) {
  std::vector<Json> docs;
  while (auto doc = stream.next()) docs.push_back(std::move(*doc));
  return partition(std::move(docs), workers);
}

}  // namespace jsonoid

#include "markagg/bigram.hpp"

#include <regex>
#include <sstream>
#include <unordered_map>

#include "markagg/error.hpp"

namespace markagg {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
    } else {
      throw Error(ErrorKind::ParseError, "invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      if (i + k >= text.size()) {
        throw Error(ErrorKind::ParseError, "truncated UTF-8 sequence at offset " + std::to_string(i));
      }
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw Error(ErrorKind::ParseError, "invalid UTF-8 continuation at offset " +
                                               std::to_string(i + k));
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) out += encode_utf8(cp);
  return out;
}

std::u32string preprocess_text(std::string_view utf8, const TextOptions& options) {
  std::optional<std::regex> heading;
  if (options.heading_pattern && !options.heading_pattern->empty()) {
    heading.emplace(*options.heading_pattern, std::regex::ECMAScript);
  }
  std::string joined;
  joined.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos <= utf8.size()) {
    std::size_t end = utf8.find('\n', pos);
    if (end == std::string_view::npos) end = utf8.size();
    std::string line(utf8.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    if (heading && std::regex_match(line, *heading)) continue;
    if (!options.strip_linebreaks) {
      joined += line;
      if (end < utf8.size()) joined += '\n';
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!joined.empty() && joined.back() != ' ' && line.front() != ' ') joined += ' ';
    joined += line;
  }
  return decode_utf8(joined);
}

BigramModel bigram_train(std::u32string_view text, double delta) {
  if (text.empty()) throw Error(ErrorKind::EmptyText, "no characters to train on");
  if (!(delta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "smoothing must be nonnegative");

  std::u32string alphabet;
  std::unordered_map<char32_t, std::size_t> index;
  std::vector<std::size_t> states;
  states.reserve(text.size());
  for (char32_t c : text) {
    auto [it, inserted] = index.try_emplace(c, alphabet.size());
    if (inserted) alphabet.push_back(c);
    states.push_back(it->second);
  }
  const std::size_t n = alphabet.size();
  Matrix counts(n, n);
  for (std::size_t t = 1; t < states.size(); ++t) counts(states[t - 1], states[t]) += 1.0;

  Matrix p(n, n);
  std::size_t empty_rows = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_total = 0.0;
    for (double c : counts.row(i)) row_total += c;
    const double denom = row_total + delta * static_cast<double>(n);
    if (denom <= 0.0) {
      ++empty_rows;
      for (std::size_t j = 0; j < n; ++j) p(i, j) = 1.0 / static_cast<double>(n);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) p(i, j) = (counts(i, j) + delta) / denom;
  }
  if (delta == 0.0) {
    std::ostringstream msg;
    msg << "unsmoothed bi-gram model may be reducible";
    if (empty_rows > 0) msg << "; " << empty_rows << " row(s) without successors set uniform";
    warn(msg.str());
  }
  return {FirstOrderChain(std::move(p)), std::move(alphabet), text.size()};
}

}  // namespace markagg
